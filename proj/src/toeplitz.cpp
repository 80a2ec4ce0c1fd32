#include "pascalx/toeplitz.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "pascalx/fft.hpp"

namespace pascalx {
namespace {

// max of the two entry-magnitude ratios the alpha scaling balances,
// in log space: log(alpha^alpha/alpha!) and its tail counterpart.
double g1(double alpha) { return alpha * std::log(alpha) - std::lgamma(alpha + 1.0); }

double g2(std::size_t n, double alpha) {
    return g1(alpha) + std::lgamma(static_cast<double>(n)) -
           (static_cast<double>(n) - 1.0) * std::log(alpha);
}

// y <- conv-theorem product with the planned Toeplitz (transposed = use
// the correlation form). In and out are length n.
void toeplitz_core(const ToeplitzPlan& plan, std::span<double> x, bool transposed) {
    const std::size_t n = plan.n;
    const std::size_t L = 2 * n;
    std::vector<double> buf(L, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        buf[k] = transposed ? x[k] / plan.scale[k] : x[k] * plan.scale[k];
    std::vector<std::complex<double>> spec(L / 2 + 1);
    default_fft().forward(L, buf.data(), spec.data());
    for (std::size_t j = 0; j < spec.size(); ++j)
        spec[j] *= transposed ? std::conj(plan.symbol[j]) : plan.symbol[j];
    default_fft().inverse(L, spec.data(), buf.data());
    const double inv = 1.0 / static_cast<double>(L);
    for (std::size_t k = 0; k < n; ++k) {
        const double v = buf[k] * inv;
        x[k] = transposed ? v * plan.scale[k] : v / plan.scale[k];
    }
}

}  // namespace

double alpha_objective(std::size_t n, double alpha) {
    return std::max(g1(alpha), g2(n, alpha));
}

double optimal_alpha(std::size_t n) {
    if (n < 2) throw std::invalid_argument("optimal_alpha: need n >= 2");
    static std::mutex mutex;
    static std::unordered_map<std::size_t, double> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }

    const double hi_end = static_cast<double>(n - 1);
    double result;
    if (hi_end <= 1.0) {
        result = 1.0;  // empty search interval [1, n-1) for n = 2
    } else {
        // Golden section around the (n-1)/e initial guess. The objective is
        // the max of an increasing and a decreasing branch, so it is
        // unimodal over the whole admissible interval.
        double lo = 1.0;
        double hi = hi_end - 1e-9 * hi_end;
        const double guess = (static_cast<double>(n) - 1.0) / M_E;
        if (guess > lo && guess < hi) {
            // narrow to a bracket around the guess when it is interior
            lo = std::max(lo, guess / 8.0);
            hi = std::min(hi, guess * 8.0);
            if (alpha_objective(n, lo) < alpha_objective(n, guess)) lo = 1.0;
            if (alpha_objective(n, hi) < alpha_objective(n, guess)) hi = hi_end - 1e-9 * hi_end;
        }
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = lo, b = hi;
        double c = b - phi * (b - a);
        double d = a + phi * (b - a);
        double fc = alpha_objective(n, c);
        double fd = alpha_objective(n, d);
        for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = alpha_objective(n, c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = alpha_objective(n, d);
            }
        }
        result = 0.5 * (a + b);
    }

    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(n, result);
    return result;
}

ToeplitzPlan make_toeplitz_plan(std::size_t n, double alpha) {
    if (n == 0) throw std::invalid_argument("make_toeplitz_plan: n must be >= 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("make_toeplitz_plan: alpha must be > 0");
    ToeplitzPlan plan;
    plan.n = n;
    plan.alpha = alpha;
    plan.scale.resize(n);
    double f = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        plan.scale[k] = f;
        if (!std::isfinite(f) || f <= 0.0)
            throw std::overflow_error("make_toeplitz_plan: alpha^k/k! left the double range");
        f = f * alpha / static_cast<double>(k + 1);
    }
    const std::size_t L = 2 * n;
    std::vector<double> padded(L, 0.0);
    std::copy(plan.scale.begin(), plan.scale.end(), padded.begin());
    std::vector<std::complex<double>> half(L / 2 + 1);
    default_fft().forward(L, padded.data(), half.data());
    plan.symbol.resize(L);
    for (std::size_t j = 0; j < L; ++j) {
        const std::size_t h = j <= L / 2 ? j : L - j;
        plan.symbol[j] = j <= L / 2 ? half[h] : std::conj(half[h]);
    }
    return plan;
}

std::vector<double> toeplitz_apply(const MatrixSpec& spec, const ToeplitzPlan& plan,
                                   std::span<const double> x) {
    if (spec.n != plan.n || x.size() != plan.n)
        throw std::invalid_argument("toeplitz_apply: dimension mismatch");
    std::vector<double> y(x.begin(), x.end());
    std::span<double> ys(y);
    if (plan.n < 2) return y;

    const bool q = spec.family == Family::Q;
    switch (spec.variant) {
        case Variant::Identity:
            toeplitz_core(plan, ys, false);
            if (q) apply_diagonal(0.5, ys);  // Q = D^(1/2) P
            break;
        case Variant::Transpose:
            if (q) apply_diagonal(0.5, ys);  // Q^T = P^T D^(1/2)
            toeplitz_core(plan, ys, true);
            break;
        case Variant::Inverse:
            apply_sign(ys);  // P^-1 = W P W, Q^-1 = W P D^(2) W
            if (q) apply_diagonal(2.0, ys);
            toeplitz_core(plan, ys, false);
            apply_sign(ys);
            break;
        case Variant::InverseTranspose:
            apply_sign(ys);  // P^-T = W P^T W, Q^-T = W D^(2) P^T W
            toeplitz_core(plan, ys, true);
            if (q) apply_diagonal(2.0, ys);
            apply_sign(ys);
            break;
    }
    return y;
}

}  // namespace pascalx
