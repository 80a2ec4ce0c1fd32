#pragma once

// Bernstein matrices and Bezier curve evaluation: the O(d n^2) De
// Casteljau sweeps, the recursive Bernstein matrix product, and the fast
// O(d n log n) evaluator that convolves the control polygon down to k+1
// points before finishing with De Casteljau (k = 0 is the pure
// convolution form; k = n degenerates to De Casteljau bitwise).

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "pascalx/fastmul.hpp"

namespace pascalx {

/// Control points of a degree-n curve in R^d, rows of an (n+1) x d matrix.
struct BezierCurve {
    std::size_t degree = 0;
    std::size_t dim = 1;
    std::vector<double> points;  // row-major (degree + 1) x dim

    double& at(std::size_t i, std::size_t d) { return points[i * dim + d]; }
    double at(std::size_t i, std::size_t d) const { return points[i * dim + d]; }
};

/// Plain-text curve format: header "n d", then n+1 rows of d decimals.
BezierCurve read_curve(std::istream& in);
BezierCurve read_curve_file(const std::string& path);
void write_curve(const BezierCurve& curve, std::ostream& out);

/// The i-th Bernstein polynomial of degree n at t: C(n,i) t^i (1-t)^(n-i).
double bernstein_poly(std::size_t n, std::size_t i, double t);

/// Lower-triangular matrix of Bernstein values, row i holding the degree-i
/// basis at t; t = 1/2 reproduces the normalized Pascal matrix.
struct BernsteinMatrixSpec {
    double t = 0.5;
    std::size_t degree = 0;  // matrix is (degree + 1) x (degree + 1)
};

/// data <- B^(t) data, data row-major (degree+1) x dim, via the recursive
/// factorization with Bernstein kernels. Row `degree` of the result is the
/// curve point; earlier rows evaluate the lower-degree prefixes.
void bernstein_matrix_apply(const BernsteinMatrixSpec& spec, std::span<double> data,
                            std::size_t dim, const RecursionPlan& plan = {});

/// gamma(t) by De Casteljau's convex-combination sweeps. O(d n^2) time,
/// O(d n) space. Throws on t outside [0, 1].
std::vector<double> de_casteljau(const BezierCurve& curve, double t);

/// The k picked by fast_eval when none is given: round(sqrt(n log2(n+2))),
/// clamped to [0, n].
std::size_t fast_eval_default_k(std::size_t degree);

/// gamma(t) in O(d n log n): one order-(n-k) Bernstein convolution per
/// column, then De Casteljau on the k+1 survivors.
std::vector<double> fast_eval(const BezierCurve& curve, double t, std::size_t k);
std::vector<double> fast_eval(const BezierCurve& curve, double t);

/// Evaluates many parameters reusing one forward FFT of each control-point
/// column (only the kernel symbol depends on t). Output order follows ts.
std::vector<std::vector<double>> batch_eval(const BezierCurve& curve, std::span<const double> ts,
                                            std::size_t k);
std::vector<std::vector<double>> batch_eval(const BezierCurve& curve, std::span<const double> ts);

}  // namespace pascalx
