#pragma once

// Cost measurement, model fitting, and the dynamic programs that pick the
// recursion threshold N. Measured costs feed A_n = a0 + a1 n + a2 n^2 and
// B_n = b0 + b1 n + b2 n log2(n); the DP minimizes total cost over binary
// recursion trees and N is the first size where recursing wins strictly.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pascalx/fastmul.hpp"

namespace pascalx {

struct CostSample {
    std::size_t n = 0;
    double quad_seconds = 0.0;  // measured A_n
    double conv_seconds = 0.0;  // measured B_n at m = floor(n/2)
};

/// Minimum wall time of fn() over `trials`, growing an inner repetition
/// count until a single measurement spans at least ~1 ms.
double min_time_seconds(const std::function<void()>& fn, unsigned trials);

/// Times the quadratic kernel (A) and the FFT-path convolution (B) per
/// size, single-threaded, minimum over trials. Throws if sizes is empty
/// or trials < 3.
std::vector<CostSample> measure_costs(std::span<const std::size_t> sizes, unsigned trials);

struct CostModel {
    double a0 = 0, a1 = 0, a2 = 0;
    double b0 = 0, b1 = 0, b2 = 0;

    double quad(std::size_t n) const {
        const double x = static_cast<double>(n);
        return a0 + a1 * x + a2 * x * x;
    }
    double conv(std::size_t n) const {
        const double x = static_cast<double>(n);
        return b0 + b1 * x + b2 * x * (n > 1 ? std::log2(x) : 0.0);
    }
};

struct FitReport {
    CostModel model;
    double quad_residual = 0.0;  // relative RMS residuals of the two fits
    double conv_residual = 0.0;
};

/// Least-squares fit of both cost bases. Throws on fewer than 3 distinct
/// sizes (rank-deficient design).
FitReport fit_cost_model(std::span<const CostSample> samples);

struct TuneResult {
    std::size_t threshold = 0;  // N; max_n + 1 means "never recurse"
    std::size_t max_n = 0;
    std::vector<double> costs;          // T_n, index by n (entry 0 unused)
    std::vector<std::uint32_t> splits;  // chosen m per n; 0 = quadratic path

    RecursionPlan to_plan(bool keep_splits = false) const;
};

/// Optimal cost with the split pinned at m = floor(n/2). Ties between the
/// quadratic path and recursing resolve to the quadratic path.
TuneResult solve_dynprog_fixed(const CostModel& model, std::size_t max_n);

/// Optimal cost with the split free. The m-search is pruned to
/// [n/4, 3n/4] unless full_range is set (the optimum never leaves the
/// pruned window for these cost shapes; tests check that).
TuneResult solve_dynprog_free(const CostModel& model, std::size_t max_n, bool full_range = false);

/// Report-only helper: optimal first-level cost of a k-part split (two-way
/// below), for k = 1..k_max, under the fitted model. Index [k].
std::vector<double> kway_first_level_costs(const CostModel& model, const TuneResult& two_way,
                                           std::size_t n, std::size_t k_max);

/// Missing/unreadable plan file.
class PlanIoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};
/// Present but malformed plan file.
class PlanParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Plan file: UTF-8 lines "version 1", "N <int>", "maxn <int>", optional
/// "split <n> <m>" entries. Unknown keys are rejected.
void save_plan(const TuneResult& result, const std::filesystem::path& path);
RecursionPlan load_plan(const std::filesystem::path& path);

}  // namespace pascalx
