#pragma once

// Binomial and Bernstein convolution kernels and the banded products they
// realize: conv_valid computes the (n-m) x n band matrix apply (a sliding
// dot product), conv_full_transpose its adjoint (a full convolution). Both
// have a direct path and an FFT path through a size-n circulant extension.

#include <complex>
#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include "pascalx/fft.hpp"

namespace pascalx {

enum class KernelKind { BinomialNormalized, BinomialUnnormalized, Bernstein };

/// Taps of one kernel:
///   BinomialNormalized    2^-m C(m,k)        (sums to 1)
///   BinomialUnnormalized  C(m,k)             (sums to 2^m)
///   Bernstein(t)          C(m,k) t^k (1-t)^(m-k)
struct ConvKernel {
    KernelKind kind = KernelKind::BinomialNormalized;
    int m = 0;
    double t = 0.5;  // Bernstein parameter; 1/2 for the binomial kinds
    std::vector<double> taps;
};

ConvKernel make_kernel(KernelKind kind, int m);

/// Bernstein kernel of order m at t in [0, 1]. Throws on t outside [0, 1].
ConvKernel make_bernstein_kernel(int m, double t);

/// DFT multiplier of the kernel's size-n circulant extension. For the
/// normalized binomial kernel this is the closed form
/// [(1 + e^(-2 pi i j / n)) / 2]^m; other kinds transform their padded taps.
struct FftSymbol {
    std::size_t n = 0;
    std::vector<std::complex<double>> values;
};

FftSymbol fft_symbol(const ConvKernel& kernel, std::size_t n);

enum class ConvPath { Direct, Fft, Auto };

/// Scratch buffers plus a multiplier cache keyed by (kind, m, t, size).
/// Reusing one workspace across calls avoids reallocation and re-deriving
/// symbols; distinct workspaces may be used concurrently.
class ConvWorkspace {
  public:
    std::vector<double> real;
    std::vector<std::complex<double>> spec;

    /// Cached half-spectrum multiplier for the kernel's length-n circulant
    /// (conjugated for the valid/correlation product).
    const std::vector<std::complex<double>>& multiplier(const ConvKernel& kernel, std::size_t n,
                                                        bool conjugated);

  private:
    struct Key {
        int kind;
        int m;
        std::uint64_t t_bits;
        std::size_t n;
        bool conj;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };
    std::unordered_map<Key, std::vector<std::complex<double>>, KeyHash> cache_;
};

/// out_i = sum_k taps_k x_(i+k), i = 0 .. n-m-1. `out` may alias the tail
/// x[m..n) (the in-place layout used by the recursive algorithms) or be
/// disjoint from x. Throws if x.size() <= m or out has the wrong length.
void conv_valid(const ConvKernel& kernel, std::span<const double> x, std::span<double> out,
                ConvPath path, ConvWorkspace& ws);
void conv_valid(const ConvKernel& kernel, std::span<const double> x, std::span<double> out,
                ConvPath path = ConvPath::Auto);

/// Full convolution of taps with x: out has length x.size() + m. This is
/// the adjoint of conv_valid. `out` must not alias x.
void conv_full_transpose(const ConvKernel& kernel, std::span<const double> x,
                         std::span<double> out, ConvPath path, ConvWorkspace& ws);
void conv_full_transpose(const ConvKernel& kernel, std::span<const double> x,
                         std::span<double> out, ConvPath path = ConvPath::Auto);

/// The Auto rule: FFT when m (n - m) > factor * n * log2 n.
bool auto_prefers_fft(std::size_t n, std::size_t m);

/// Half spectrum (n/2 + 1 values) of the kernel's size-n circulant
/// eigenvalues, conjugated for correlation-form products. This is what the
/// FFT paths multiply by; exposed so batch evaluators can stream their own
/// pipelines bit-identically.
void circulant_multiplier(KernelKind kind, int m, double t, std::size_t n, bool conjugated,
                          std::complex<double>* out);

}  // namespace pascalx
