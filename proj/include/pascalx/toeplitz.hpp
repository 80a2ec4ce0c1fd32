#pragma once

// The O(n log n) Toeplitz/circulant factorization baseline
// P = Lambda^-1 T Lambda with f_k = alpha^k / k!, evaluated through
// zero-padded 2n-point FFTs. Kept for comparison experiments: it is
// unstable by design in floating point (all digits are lost well before
// n = 128) and documented as such; do not use it for real computations.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pascalx/matrix_spec.hpp"

namespace pascalx {

struct ToeplitzPlan {
    std::size_t n = 0;
    double alpha = 1.0;
    std::vector<double> scale;                  // f_k = alpha^k / k!
    std::vector<std::complex<double>> symbol;   // DFT of (f || 0_n), half spectrum
};

/// argmin over [1, n-1) of max(alpha^alpha/alpha!,
/// alpha^alpha (n-1)! / (alpha^(n-1) alpha!)), evaluated in log space and
/// refined by golden section around the (n-1)/e heuristic. Cached per n.
/// Throws for n < 2.
double optimal_alpha(std::size_t n);

/// Log-space objective the alpha search minimizes (exposed for tests).
double alpha_objective(std::size_t n, double alpha);

/// Plan for dimension n. Throws std::overflow_error when alpha^k/k!
/// leaves the double range (alpha-optimal plans stay finite to n ~ 1500).
ToeplitzPlan make_toeplitz_plan(std::size_t n, double alpha);
inline ToeplitzPlan make_toeplitz_plan(std::size_t n) {
    return make_toeplitz_plan(n, n >= 2 ? optimal_alpha(n) : 1.0);
}

/// y = M x via the circulant embedding, with the Q-family / inverse
/// variants wrapped through the diagonal and sign identities.
std::vector<double> toeplitz_apply(const MatrixSpec& spec, const ToeplitzPlan& plan,
                                   std::span<const double> x);

}  // namespace pascalx
