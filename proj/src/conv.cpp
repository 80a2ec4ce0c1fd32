#include "pascalx/conv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pascalx/binomial.hpp"
#include "pascalx/flops.hpp"

namespace pascalx {
namespace {

// Taps C(m,k) t^k (1-t)^(m-k) built outward from the largest tap so the
// running product never travels through the underflowed tails. Long double
// keeps the accumulated recurrence error near m ulp of double and has
// enough exponent range for any order this library meets. For t = 1/2 and
// m <= 52 every value is exactly representable and the result is the exact
// normalized binomial row.
std::vector<double> convex_taps(int m, double t) {
    std::vector<double> taps(static_cast<std::size_t>(m) + 1, 0.0);
    const long double lt = static_cast<long double>(t);
    const long double lu = 1.0L - lt;
    int peak = static_cast<int>(std::llround(static_cast<double>(m) * t));
    peak = std::clamp(peak, 0, m);

    long double v = binomial_ld(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(peak));
    v *= powl(lt, static_cast<long double>(peak));
    v *= powl(lu, static_cast<long double>(m - peak));
    taps[static_cast<std::size_t>(peak)] = static_cast<double>(v);

    if (peak > 0) {
        const long double down = lu / lt;
        long double w = v;
        for (int k = peak; k >= 1; --k) {
            w = w * static_cast<long double>(k) / static_cast<long double>(m - k + 1) * down;
            taps[static_cast<std::size_t>(k) - 1] = static_cast<double>(w);
        }
    }
    if (peak < m) {
        const long double up = lt / lu;
        long double w = v;
        for (int k = peak; k < m; ++k) {
            w = w * static_cast<long double>(m - k) / static_cast<long double>(k + 1) * up;
            taps[static_cast<std::size_t>(k) + 1] = static_cast<double>(w);
        }
    }
    return taps;
}

std::vector<double> unnormalized_taps(int m) {
    std::vector<double> taps(static_cast<std::size_t>(m) + 1);
    long double v = 1.0L;
    for (int k = 0; k <= m; ++k) {
        taps[static_cast<std::size_t>(k)] = static_cast<double>(v);
        v = v * static_cast<long double>(m - k) / static_cast<long double>(k + 1);
    }
    return taps;
}

// One circulant eigenvalue: base(theta)^m with
//   base = (1 + e^{-i theta})/2      normalized binomial
//   base = 1 + e^{-i theta}          unnormalized binomial
//   base = (1 - t) + t e^{-i theta}  Bernstein.
std::complex<double> symbol_base(KernelKind kind, double t, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    switch (kind) {
        case KernelKind::BinomialNormalized: return {(1.0 + c) * 0.5, -0.5 * s};
        case KernelKind::BinomialUnnormalized: return {1.0 + c, -s};
        case KernelKind::Bernstein: return {(1.0 - t) + t * c, -t * s};
    }
    return {};
}

std::complex<double> cpow_u(std::complex<double> z, unsigned e) {
    std::complex<double> r{1.0, 0.0};
    while (e) {
        if (e & 1u) r *= z;
        z *= z;
        e >>= 1;
    }
    return r;
}

constexpr double kAutoFftFactor = 16.0;

void conv_valid_direct(const ConvKernel& kernel, std::span<const double> x,
                       std::span<double> out) {
    const std::size_t m = static_cast<std::size_t>(kernel.m);
    const double* taps = kernel.taps.data();
    // Backward over outputs: with out aliasing x[m..n) every read index
    // stays at or below the write position, so nothing is clobbered early.
    for (std::size_t i = out.size(); i-- > 0;) {
        double acc = taps[0] * x[i];
        for (std::size_t k = 1; k <= m; ++k) acc += taps[k] * x[i + k];
        out[i] = acc;
    }
    count_flops(m * out.size(), (m + 1) * out.size());
}

void conv_full_direct(const ConvKernel& kernel, std::span<const double> x, std::span<double> out) {
    const std::size_t m = static_cast<std::size_t>(kernel.m);
    const std::size_t len = x.size();
    const double* taps = kernel.taps.data();
    for (std::size_t s = 0; s < out.size(); ++s) {
        const std::size_t jlo = s >= len ? s - len + 1 : 0;
        const std::size_t jhi = std::min(m, s);
        double acc = 0.0;
        for (std::size_t j = jlo; j <= jhi; ++j) acc += taps[j] * x[s - j];
        out[s] = acc;
    }
    count_flops(m * len, (m + 1) * len);
}

// Model for work done inside the FFT path: two real transforms at the
// usual 2.5 n log2 n estimate plus the pointwise multiply and scaling.
void count_fft_flops(std::size_t n, std::size_t nout) {
    const double lg = n > 1 ? std::log2(static_cast<double>(n)) : 1.0;
    const auto transform = static_cast<std::uint64_t>(2.5 * static_cast<double>(n) * lg);
    count_flops(2 * transform, 4 * (n / 2 + 1) + nout);
}

}  // namespace

ConvKernel make_kernel(KernelKind kind, int m) {
    if (m < 0) throw std::invalid_argument("make_kernel: order must be nonnegative");
    ConvKernel k;
    k.kind = kind;
    k.m = m;
    switch (kind) {
        case KernelKind::BinomialNormalized: k.taps = convex_taps(m, 0.5); break;
        case KernelKind::BinomialUnnormalized: k.taps = unnormalized_taps(m); break;
        case KernelKind::Bernstein: throw std::invalid_argument("use make_bernstein_kernel");
    }
    return k;
}

ConvKernel make_bernstein_kernel(int m, double t) {
    if (m < 0) throw std::invalid_argument("make_bernstein_kernel: order must be nonnegative");
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("make_bernstein_kernel: t outside [0, 1]");
    ConvKernel k;
    k.kind = KernelKind::Bernstein;
    k.m = m;
    k.t = t;
    k.taps = convex_taps(m, t);
    return k;
}

FftSymbol fft_symbol(const ConvKernel& kernel, std::size_t n) {
    if (n < kernel.taps.size())
        throw std::invalid_argument("fft_symbol: transform size below m + 1");
    FftSymbol sym;
    sym.n = n;
    sym.values.resize(n);
    if (kernel.kind == KernelKind::BinomialNormalized) {
        for (std::size_t j = 0; j < n; ++j) {
            const double theta = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
            sym.values[j] =
                cpow_u(symbol_base(kernel.kind, kernel.t, theta), static_cast<unsigned>(kernel.m));
        }
        return sym;
    }
    // Other kinds: DFT of the zero-padded taps.
    std::vector<double> padded(n, 0.0);
    std::copy(kernel.taps.begin(), kernel.taps.end(), padded.begin());
    std::vector<std::complex<double>> half(n / 2 + 1);
    default_fft().forward(n, padded.data(), half.data());
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t h = j <= n / 2 ? j : n - j;
        sym.values[j] = j <= n / 2 ? half[h] : std::conj(half[h]);
    }
    return sym;
}

std::size_t ConvWorkspace::KeyHash::operator()(const Key& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    };
    mix(static_cast<std::uint64_t>(k.kind));
    mix(static_cast<std::uint64_t>(k.m));
    mix(k.t_bits);
    mix(static_cast<std::uint64_t>(k.n));
    mix(static_cast<std::uint64_t>(k.conj));
    return static_cast<std::size_t>(h);
}

void circulant_multiplier(KernelKind kind, int m, double t, std::size_t n, bool conjugated,
                          std::complex<double>* out) {
    const double sign = conjugated ? -1.0 : 1.0;
    for (std::size_t j = 0; j <= n / 2; ++j) {
        const double theta = sign * 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(n);
        out[j] = cpow_u(symbol_base(kind, t, theta), static_cast<unsigned>(m));
    }
}

const std::vector<std::complex<double>>& ConvWorkspace::multiplier(const ConvKernel& kernel,
                                                                   std::size_t n,
                                                                   bool conjugated) {
    std::uint64_t t_bits;
    static_assert(sizeof(t_bits) == sizeof(double));
    const double t = kernel.kind == KernelKind::Bernstein ? kernel.t : 0.5;
    __builtin_memcpy(&t_bits, &t, sizeof(t_bits));
    Key key{static_cast<int>(kernel.kind), kernel.m, t_bits, n, conjugated};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    std::vector<std::complex<double>> mult(n / 2 + 1);
    circulant_multiplier(kernel.kind, kernel.m, t, n, conjugated, mult.data());
    return cache_.emplace(key, std::move(mult)).first->second;
}

bool auto_prefers_fft(std::size_t n, std::size_t m) {
    if (n < 2 || m == 0) return false;
    const double work_direct = static_cast<double>(m) * static_cast<double>(n - m);
    return work_direct > kAutoFftFactor * static_cast<double>(n) * std::log2(static_cast<double>(n));
}

void conv_valid(const ConvKernel& kernel, std::span<const double> x, std::span<double> out,
                ConvPath path, ConvWorkspace& ws) {
    const std::size_t n = x.size();
    const std::size_t m = static_cast<std::size_t>(kernel.m);
    if (n <= m) throw std::invalid_argument("conv_valid: need x length > kernel order");
    if (out.size() != n - m) throw std::invalid_argument("conv_valid: bad output length");
    if (path == ConvPath::Auto) path = auto_prefers_fft(n, m) ? ConvPath::Fft : ConvPath::Direct;
    if (path == ConvPath::Direct || m == 0) {
        conv_valid_direct(kernel, x, out);
        return;
    }
    // Size-n circulant extension; the first n-m circular outputs never wrap,
    // so they equal the valid product exactly.
    ws.real.resize(n);
    ws.spec.resize(n / 2 + 1);
    std::copy(x.begin(), x.end(), ws.real.begin());
    default_fft().forward(n, ws.real.data(), ws.spec.data());
    const auto& mult = ws.multiplier(kernel, n, /*conjugated=*/true);
    for (std::size_t j = 0; j < ws.spec.size(); ++j) ws.spec[j] *= mult[j];
    default_fft().inverse(n, ws.spec.data(), ws.real.data());
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ws.real[i] * scale;
    count_fft_flops(n, out.size());
}

void conv_valid(const ConvKernel& kernel, std::span<const double> x, std::span<double> out,
                ConvPath path) {
    ConvWorkspace ws;
    conv_valid(kernel, x, out, path, ws);
}

void conv_full_transpose(const ConvKernel& kernel, std::span<const double> x,
                         std::span<double> out, ConvPath path, ConvWorkspace& ws) {
    const std::size_t m = static_cast<std::size_t>(kernel.m);
    const std::size_t n = x.size() + m;
    if (x.empty()) throw std::invalid_argument("conv_full_transpose: empty input");
    if (out.size() != n) throw std::invalid_argument("conv_full_transpose: bad output length");
    if (path == ConvPath::Auto) path = auto_prefers_fft(n, m) ? ConvPath::Fft : ConvPath::Direct;
    if (path == ConvPath::Direct || m == 0) {
        conv_full_direct(kernel, x, out);
        return;
    }
    // A size-n transform holds the whole linear convolution, no wrap at all.
    ws.real.assign(n, 0.0);
    ws.spec.resize(n / 2 + 1);
    std::copy(x.begin(), x.end(), ws.real.begin());
    default_fft().forward(n, ws.real.data(), ws.spec.data());
    const auto& mult = ws.multiplier(kernel, n, /*conjugated=*/false);
    for (std::size_t j = 0; j < ws.spec.size(); ++j) ws.spec[j] *= mult[j];
    default_fft().inverse(n, ws.spec.data(), ws.real.data());
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = ws.real[i] * scale;
    count_fft_flops(n, out.size());
}

void conv_full_transpose(const ConvKernel& kernel, std::span<const double> x,
                         std::span<double> out, ConvPath path) {
    ConvWorkspace ws;
    conv_full_transpose(kernel, x, out, path, ws);
}

}  // namespace pascalx
