#pragma once

// Recursive matrix-vector products for the Pascal family. The two-way
// recursion splits x at m = floor(n/2), turns the tail block into a valid
// convolution with the order-m binomial kernel (via the FFT), and recurses
// on both halves; below the threshold it falls back to the in-place
// quadratic sweeps. Transposes run the mirrored factorization (children
// first, then a full-convolution accumulation); inverses are rewritten to
// identity/transpose recursions through P^-1 = W P W and Q^-1 = W P D^(2) W.

#include <cstddef>
#include <span>
#include <vector>

#include "pascalx/matrix_spec.hpp"

namespace pascalx {

/// Threshold below which the quadratic kernels win on the reference
/// machine; autotuning replaces it with a locally measured value.
inline constexpr std::size_t kDefaultThreshold = 452;

/// Integer partition of n with its prefix sums (c_0 = 0, c_k = n).
struct Partition {
    std::vector<std::size_t> parts;
    std::vector<std::size_t> prefixes;
};

/// Near-uniform partition, parts differing by at most one, larger first.
/// Throws unless 1 <= k <= n.
Partition partition_uniform(std::size_t n, std::size_t k);

/// Strategy object for the recursion: base-case threshold, first-level
/// branching, and an optional per-size split table (from the free-split
/// dynamic program; empty means m = floor(n/2) everywhere).
struct RecursionPlan {
    std::size_t threshold = kDefaultThreshold;
    std::size_t branch = 2;
    std::vector<std::uint32_t> splits;  // splits[n] = m, 0 = use floor(n/2)

    std::size_t split(std::size_t n) const {
        if (n < splits.size() && splits[n] != 0) return splits[n];
        return n / 2;
    }
    void validate() const;
};

/// x <- M x by the two-way recursion. Throws on dimension mismatch or an
/// invalid plan.
void recursive_apply(const MatrixSpec& spec, const RecursionPlan& plan, std::span<double> x);

/// Same product with a k-part uniform first level (subsequent levels are
/// two-way). k == 2 is exactly recursive_apply. Throws if k < 2 or k > n.
void kway_apply(const MatrixSpec& spec, std::size_t k, const RecursionPlan& plan,
                std::span<double> x);

}  // namespace pascalx
