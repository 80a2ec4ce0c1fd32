#pragma once

// Extended-precision ground truth. Products are evaluated densely: matrix
// entries come from the exact Pascal-row recurrence carried in MPFR at a
// working precision inflated past the requested digits, inputs are scaled
// by exact powers of two and signs, and only the accumulation rounds.
// Deliberately O(n^2 * digits) slow; use it for measurements, not work.

#include <cstddef>
#include <span>
#include <vector>

#include "pascalx/matrix_spec.hpp"

namespace pascalx {

struct PrecisionConfig {
    unsigned decimal_digits = 50;
};

inline constexpr std::size_t kOracleSizeCap = std::size_t{1} << 17;

/// Dense M x in cfg-digit arithmetic, rounded to double at the end.
/// Throws when spec.n exceeds the size cap.
std::vector<double> oracle_apply(const MatrixSpec& spec, std::span<const double> x,
                                 const PrecisionConfig& cfg = {});

/// One batched product sharing the binomial entry stream with the others.
struct OracleJob {
    Variant variant = Variant::Identity;
    std::span<const double> x;
    std::vector<double>* y = nullptr;
};

/// Runs all jobs (same family, same n) in one sweep over the entry stream;
/// jobs are distributed over a couple of threads. This is what makes
/// 10-trial experiments at n = 2^16 affordable.
void oracle_apply_batch(Family family, std::size_t n, std::span<OracleJob> jobs,
                        const PrecisionConfig& cfg = {});

/// ||y - y_hat||_inf / ||y||_inf. Throws if lengths differ or y_true is
/// identically zero.
double uniform_relative_error(std::span<const double> y_true, std::span<const double> y_hat);

/// Bezier curve point by the Bernstein sum in cfg-digit arithmetic.
/// `points` is row-major (count x dim) with count = degree + 1.
std::vector<double> oracle_bezier_point(std::span<const double> points, std::size_t count,
                                        std::size_t dim, double t,
                                        const PrecisionConfig& cfg = {});

}  // namespace pascalx
