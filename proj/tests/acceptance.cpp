// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Criteria pin real tolerances; timing checks use minimum-of-trials
// measurements. The extended-precision oracle runs dominate the wall time
// (dense 50-digit products at n = 2^16).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pascalx/bezier.hpp"
#include "pascalx/conv.hpp"
#include "pascalx/fastmul.hpp"
#include "pascalx/oracle.hpp"
#include "pascalx/quadratic.hpp"
#include "pascalx/toeplitz.hpp"
#include "pascalx/tune.hpp"

using namespace pascalx;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> x(n);
    for (auto& v : x) v = gauss(rng);
    return x;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double inf() { return std::numeric_limits<double>::infinity(); }

const Variant kVariants[] = {Variant::Identity, Variant::Transpose, Variant::Inverse,
                             Variant::InverseTranspose};

// ---- criteria 1 & 2: stability of the quadratic and recursive paths ----

struct StabilityCell {
    Variant variant;
    std::size_t n;
    double quad_err = 0.0;
    double rec_err = 0.0;
};

void criteria_1_2() {
    const std::size_t sizes[] = {16, 256, 4096, 65536};
    const unsigned trials = 10;
    const PrecisionConfig cfg{50};
    RecursionPlan plan;  // shipped threshold
    std::vector<StabilityCell> cells;

    for (std::size_t n : sizes) {
        for (Variant variant : kVariants) {
            const MatrixSpec spec{Family::Q, variant, n};
            std::vector<std::vector<double>> xs(trials), quad(trials), rec(trials), truth(trials);
            bool need_oracle = false;
            for (unsigned t = 0; t < trials; ++t) {
                xs[t] = gaussian(n, 0xC0FFEE + 1000 * n + 131 * static_cast<unsigned>(variant) + t);
                quad[t] = xs[t];
                apply_quadratic(spec, Strategy::DirectMultiply, quad[t]);
                rec[t] = xs[t];
                recursive_apply(spec, plan, rec[t]);
                if (all_finite(quad[t]) || all_finite(rec[t])) need_oracle = true;
            }
            if (need_oracle) {
                std::vector<OracleJob> jobs(trials);
                for (unsigned t = 0; t < trials; ++t)
                    jobs[t] = OracleJob{variant, xs[t], &truth[t]};
                oracle_apply_batch(Family::Q, n, jobs, cfg);
            }
            StabilityCell cell{variant, n};
            for (unsigned t = 0; t < trials; ++t) {
                const double qe = need_oracle && all_finite(quad[t])
                                      ? uniform_relative_error(truth[t], quad[t])
                                      : inf();
                const double re = need_oracle && all_finite(rec[t])
                                      ? uniform_relative_error(truth[t], rec[t])
                                      : inf();
                cell.quad_err += qe / trials;
                cell.rec_err += re / trials;
            }
            cells.push_back(cell);
            std::printf("    stability %-18s n=%-6zu quad %.3e  recursive %.3e\n",
                        to_string(MatrixSpec{Family::Q, variant, n}).c_str(), n, cell.quad_err,
                        cell.rec_err);
            std::fflush(stdout);
        }
    }

    bool c1 = true, c2 = true;
    int c1_bad = 0, c2_bad = 0;
    for (const auto& cell : cells) {
        if (!(cell.quad_err <= 1e-10)) {
            c1 = false;
            ++c1_bad;
        }
        const bool rec_ok = cell.rec_err <= 10.0 * cell.quad_err && cell.rec_err <= 1e-9;
        if (!rec_ok) {
            c2 = false;
            ++c2_bad;
        }
    }
    const std::string note =
        " (inverse variants at n >= 2^12 overflow the double range: ||Q^-1||_inf = 3^(n-1) "
        "~ 10^1953 at n = 4096, so no double-precision method can satisfy the stated bound "
        "there; see the per-cell table)";
    report(1, "quadratic kernels: mean uniform relative error <= 1e-10 on the size grid",
           c1, c1 ? "16/16 cells" : std::to_string(16 - c1_bad) + "/16 cells" + note);
    report(2, "recursive path: error <= 10x quadratic and <= 1e-9",
           c2, c2 ? "16/16 cells" : std::to_string(16 - c2_bad) + "/16 cells" + note);
}

// ---- criterion 3: Toeplitz instability ----

void criterion_3() {
    const PrecisionConfig cfg{50};
    const unsigned trials = 10;
    std::size_t crossover = 0;
    bool beyond_ok = true;
    std::string detail;
    for (std::size_t n = 2; n <= 512; n *= 2) {
        const MatrixSpec spec{Family::Q, Variant::Identity, n};
        const ToeplitzPlan plan = make_toeplitz_plan(n);
        double mean = 0.0;
        for (unsigned t = 0; t < trials; ++t) {
            const auto x = gaussian(n, 0xBAD + 100 * n + t);
            const auto y = toeplitz_apply(spec, plan, x);
            const auto truth = oracle_apply(spec, x, cfg);
            const double e = all_finite(y) ? uniform_relative_error(truth, y) : inf();
            mean += e / trials;
        }
        if (crossover == 0 && mean >= 1.0) crossover = n;
        if (n >= 128 && !(mean >= 1.0)) beyond_ok = false;
        detail += "n" + std::to_string(n) + "=" + std::to_string(mean).substr(0, 9) + " ";
    }
    const bool pass = crossover != 0 && crossover <= 128 && beyond_ok;
    report(3, "Toeplitz loses all digits by n = 128",
           pass, "crossover at n = " + std::to_string(crossover));
}

// ---- criterion 4: alpha scaling direction ----

void criterion_4() {
    const PrecisionConfig cfg{50};
    bool pass = true;
    std::string detail;
    for (std::size_t n : {16u, 32u, 64u}) {
        const MatrixSpec spec{Family::Q, Variant::Identity, n};
        const ToeplitzPlan tuned = make_toeplitz_plan(n);
        const ToeplitzPlan plain = make_toeplitz_plan(n, 1.0);
        double e_tuned = 0.0, e_plain = 0.0;
        for (unsigned t = 0; t < 10; ++t) {
            const auto x = gaussian(n, 0xA1FA + 100 * n + t);
            const auto truth = oracle_apply(spec, x, cfg);
            e_tuned += uniform_relative_error(truth, toeplitz_apply(spec, tuned, x)) / 10.0;
            e_plain += uniform_relative_error(truth, toeplitz_apply(spec, plain, x)) / 10.0;
        }
        if (!(e_tuned <= e_plain)) pass = false;
        detail += "n" + std::to_string(n) + ": " + std::to_string(e_tuned).substr(0, 8) +
                  " <= " + std::to_string(e_plain).substr(0, 8) + "  ";
    }
    report(4, "alpha_opt error <= alpha = 1 error at n in {16, 32, 64}", pass, detail);
}

// ---- criterion 5: speed crossover ----

void criterion_5() {
    // tune on this machine
    std::vector<std::size_t> sizes{32, 48, 64, 96, 128, 192, 256, 384, 512, 768,
                                   1024, 1536, 2048, 3072, 4096};
    const auto samples = measure_costs(sizes, 5);
    const FitReport fit = fit_cost_model(samples);
    const TuneResult tuned = solve_dynprog_fixed(fit.model, std::size_t{1} << 17);
    if (tuned.threshold > tuned.max_n) {
        report(5, "speed crossover", false, "dynamic program found no crossover");
        return;
    }
    const std::size_t N = tuned.threshold;
    RecursionPlan plan = tuned.to_plan();

    const std::size_t big = std::size_t{1} << 16;
    auto xq = gaussian(big, 0x5EED);
    const MatrixSpec spec{Family::Q, Variant::Identity, big};
    const double t_quad = min_time_seconds(
        [&] { apply_quadratic(spec, Strategy::DirectMultiply, xq); }, 5);
    auto xr = gaussian(big, 0x5EED);
    const double t_rec = min_time_seconds([&] { recursive_apply(spec, plan, xr); }, 5);
    const double speedup = t_quad / t_rec;

    // measured crossover: smallest grid point where the recursion wins
    std::size_t measured = 0;
    for (double g = std::max(8.0, static_cast<double>(N) / 4.0);
         g <= 4.0 * static_cast<double>(N); g *= 1.25) {
        const std::size_t n = static_cast<std::size_t>(g);
        const MatrixSpec s{Family::Q, Variant::Identity, n};
        auto a = gaussian(n, n);
        const double tq = min_time_seconds(
            [&] { apply_quadratic(s, Strategy::DirectMultiply, a); }, 5);
        auto b = gaussian(n, n);
        const double tr = min_time_seconds([&] { recursive_apply(s, plan, b); }, 5);
        if (tr < tq) {
            measured = n;
            break;
        }
    }
    const bool in_band = measured != 0 && measured >= N / 4 && measured <= 4 * N;
    const bool pass = speedup >= 10.0 && in_band;
    char detail[256];
    std::snprintf(detail, sizeof detail,
                  "tuned N = %zu, speedup at 2^16 = %.1fx, measured crossover n = %zu", N,
                  speedup, measured);
    report(5, "recursive >= 10x quadratic at 2^16; crossover within [N/4, 4N]", pass, detail);
}

// ---- criterion 6: dynamic program correctness ----

double tree_cost(std::size_t n, const CostModel& model, bool free_split,
                 std::map<std::size_t, double>& memo) {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    double best = model.quad(n);
    if (n >= 2) {
        const std::size_t lo = free_split ? 1 : n / 2;
        const std::size_t hi = free_split ? n - 1 : n / 2;
        for (std::size_t m = lo; m <= hi; ++m)
            best = std::min(best, tree_cost(m, model, free_split, memo) +
                                      tree_cost(n - m, model, free_split, memo) + model.conv(n));
    }
    memo.emplace(n, best);
    return best;
}

void criterion_6() {
    const CostModel models[] = {
        {1e-8, 2e-9, 3e-10, 4e-8, 5e-9, 1.5e-9},
        {0.0, 0.0, 1e-9, 0.0, 0.0, 2e-9},
        {5e-7, 0.0, 2e-10, 1e-7, 1e-9, 1e-10},
        {0.0, 0.0, 1e-9, 1e100, 0.0, 0.0},
    };
    bool pass = true;
    for (const auto& model : models) {
        const TuneResult fixed = solve_dynprog_fixed(model, 128);
        const TuneResult freed = solve_dynprog_free(model, 128, /*full_range=*/true);
        std::map<std::size_t, double> memo_fixed, memo_free;
        for (std::size_t n = 1; n <= 128; ++n) {
            if (fixed.costs[n] != tree_cost(n, model, false, memo_fixed)) pass = false;
            if (freed.costs[n] != tree_cost(n, model, true, memo_free)) pass = false;
        }
        const TuneResult fixed512 = solve_dynprog_fixed(model, 512);
        const TuneResult freed512 = solve_dynprog_free(model, 512, /*full_range=*/true);
        for (std::size_t n = 1; n <= 512; ++n)
            if (!(freed512.costs[n] <= fixed512.costs[n])) pass = false;
    }
    report(6, "DP solutions equal exhaustive enumeration exactly; free <= fixed", pass, "");
}

// ---- criterion 7: round trips and the sign-conjugation identity ----

void criterion_7() {
    bool pass = true;
    std::string detail;
    for (std::size_t n : {16u, 256u, 1024u, 4096u}) {
        for (Variant first : {Variant::Identity, Variant::Transpose}) {
            const MatrixSpec spec{Family::Q, first, n};
            const auto x = gaussian(n, 0x707 + n);
            auto y = x;
            apply_quadratic(spec, Strategy::DirectMultiply, y);
            apply_quadratic(inverse_of(spec), Strategy::DirectMultiply, y);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                num = std::max(num, std::abs(y[i] - x[i]));
                den = std::max(den, std::abs(x[i]));
            }
            const double err = num / den;
            if (!(err <= 1e-10)) pass = false;
            std::printf("    roundtrip Q %-9s n=%-5zu err %.3e\n",
                        to_string(first).c_str(), n, err);
        }
    }
    if (!pass) {
        // the floor is intrinsic: even exact 50-digit applies cannot round
        // trip once the intermediate is rounded to double, because Q^-1
        // amplifies that rounding by up to 3^(n-1)
        const std::size_t n = 256;
        const auto x = gaussian(n, 0x707 + n);
        const PrecisionConfig cfg{50};
        const auto y = oracle_apply({Family::Q, Variant::Identity, n}, x, cfg);
        const auto z = oracle_apply({Family::Q, Variant::Inverse, n}, y, cfg);
        std::printf("    note: with BOTH legs evaluated by the 50-digit oracle and only the\n"
                    "    intermediate rounded to double, the n=256 round trip still errs by "
                    "%.3e\n",
                    uniform_relative_error(x, z));
    }
    std::fflush(stdout);

    // P^-1 = W P W at n <= 48, integer-exact: multiply the dense W P W by
    // dense P in 128-bit integers and demand the identity matrix
    const std::size_t n = 48;
    std::vector<long long> p(n * n), conj(n * n);
    const DenseMatrix dense_p = dense_materialize({Family::P, Variant::Identity, n});
    const DenseMatrix dense_inv = dense_materialize({Family::P, Variant::Inverse, n});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            p[i * n + j] = static_cast<long long>(dense_p.at(i, j));
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            conj[i * n + j] = static_cast<long long>(sign * dense_p.at(i, j));
            if (dense_inv.at(i, j) != sign * dense_p.at(i, j)) pass = false;  // entries match WPW
        }
    for (std::size_t i = 0; i < n && pass; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            __int128 acc = 0;
            for (std::size_t k = 0; k < n; ++k)
                acc += static_cast<__int128>(conj[i * n + k]) * p[k * n + j];
            if (acc != (i == j ? 1 : 0)) {
                pass = false;
                break;
            }
        }
    report(7, "Q round trips within 1e-10 up to n = 4096; P^-1 = W P W exactly at n = 48", pass,
           "");
}

// ---- criterion 8: Bezier evaluator agreement ----

void criterion_8() {
    bool pass = true;
    double worst = 0.0;
    RecursionPlan plan;
    for (std::size_t degree : {16u, 256u, 1024u, 4096u}) {
        for (std::size_t dim : {1u, 2u, 3u}) {
            BezierCurve curve;
            curve.degree = degree;
            curve.dim = dim;
            curve.points = gaussian((degree + 1) * dim, 0xBE2 + degree + dim);
            for (double t : {0.37, 0.5, 0.93}) {
                const auto ref = de_casteljau(curve, t);
                auto check_point = [&](const std::vector<double>& p) {
                    double num = 0.0, den = 0.0;
                    for (std::size_t d = 0; d < dim; ++d) {
                        num = std::max(num, std::abs(ref[d] - p[d]));
                        den = std::max(den, std::abs(ref[d]));
                    }
                    const double e = num / den;
                    worst = std::max(worst, e);
                    if (!(e <= 1e-11)) pass = false;
                };
                check_point(fast_eval(curve, t, 0));
                check_point(fast_eval(curve, t, fast_eval_default_k(degree)));
                check_point(fast_eval(curve, t, degree));
                auto data = curve.points;
                bernstein_matrix_apply({t, degree}, data, dim, plan);
                check_point(std::vector<double>(data.end() - static_cast<std::ptrdiff_t>(dim),
                                                data.end()));
            }
        }
    }
    // endpoint interpolation and affine invariance
    BezierCurve c;
    c.degree = 64;
    c.dim = 2;
    c.points = gaussian(130, 0xAF1);
    const auto p0 = de_casteljau(c, 0.0);
    const auto p1 = de_casteljau(c, 1.0);
    for (std::size_t d = 0; d < 2; ++d) {
        if (p0[d] != c.at(0, d)) pass = false;
        if (p1[d] != c.at(64, d)) pass = false;
    }
    BezierCurve mapped = c;
    for (std::size_t i = 0; i <= 64; ++i) {
        mapped.at(i, 0) = 3.0 * c.at(i, 0) + 0.5 * c.at(i, 1) - 2.0;
        mapped.at(i, 1) = -c.at(i, 0) + 2.0 * c.at(i, 1) + 1.0;
    }
    for (double t : {0.25, 0.8}) {
        const auto a = de_casteljau(c, t);
        const auto b = de_casteljau(mapped, t);
        if (std::abs(b[0] - (3.0 * a[0] + 0.5 * a[1] - 2.0)) >
            1e-12 * std::max(1.0, std::abs(b[0])))
            pass = false;
        if (std::abs(b[1] - (-a[0] + 2.0 * a[1] + 1.0)) > 1e-12 * std::max(1.0, std::abs(b[1])))
            pass = false;
    }
    char detail[96];
    std::snprintf(detail, sizeof detail, "worst cross-evaluator error %.2e", worst);
    report(8, "Bezier evaluators agree to 1e-11 through degree 4096", pass, detail);
}

// ---- criterion 9: convolution engine ----

void criterion_9() {
    bool pass = true;
    double worst_path = 0.0, worst_adj = 0.0;
    // near-full order is represented by m = n-2: at m = n-1 the output is
    // a single scalar and the relative metric is unbounded whenever that
    // one Gaussian draw lands near zero (the absolute gap stays at ulp
    // scale either way)
    for (std::size_t n : {16u, 256u, 1023u, 4096u}) {
        const auto x = gaussian(n, 0xC04 + n);
        std::vector<std::size_t> orders{1, 2, n / 4, n / 2, n - 2};
        for (std::size_t m : orders) {
            if (m == 0 || m >= n) continue;
            const auto kernel = make_kernel(KernelKind::BinomialNormalized, static_cast<int>(m));
            std::vector<double> direct(n - m), fft(n - m);
            conv_valid(kernel, x, direct, ConvPath::Direct);
            conv_valid(kernel, x, fft, ConvPath::Fft);
            const double e = uniform_relative_error(direct, fft);
            worst_path = std::max(worst_path, e);
            if (!(e <= 1e-12)) pass = false;

            const auto y = gaussian(n - m, 0xAD2 + n + m);
            std::vector<double> full(n);
            conv_full_transpose(kernel, y, full, ConvPath::Direct);
            long double lhs = 0.0L, rhs = 0.0L;
            for (std::size_t i = 0; i < n - m; ++i)
                lhs += static_cast<long double>(direct[i]) * y[i];
            for (std::size_t i = 0; i < n; ++i)
                rhs += static_cast<long double>(x[i]) * full[i];
            const double adj = std::abs(static_cast<double>(lhs - rhs)) /
                               std::max(1.0, std::abs(static_cast<double>(lhs)));
            worst_adj = std::max(worst_adj, adj);
            if (!(adj <= 1e-13)) pass = false;
        }
    }
    char detail[96];
    std::snprintf(detail, sizeof detail, "worst path gap %.2e, worst adjoint gap %.2e",
                  worst_path, worst_adj);
    report(9, "FFT vs direct within 1e-12 up to n = 4096; adjoint within 1e-13", pass, detail);
}

// ---- criterion 10: k-way equivalence and the ratio table ----

void criterion_10() {
    RecursionPlan plan;
    bool pass = true;
    const std::size_t sizes[] = {1u << 13, 1u << 14, 1u << 15, 1u << 16};
    const std::size_t ks[] = {4, 6, 8};

    for (std::size_t n : sizes) {
        const MatrixSpec spec{Family::Q, Variant::Identity, n};
        const auto x = gaussian(n, 0x8A1 + n);
        auto ref = x;
        recursive_apply(spec, plan, ref);
        for (std::size_t k : ks) {
            auto got = x;
            kway_apply(spec, k, plan, got);
            if (!(uniform_relative_error(ref, got) <= 1e-11)) pass = false;
        }
    }

    // ratio table in the paper's layout (reported, machine-specific)
    std::printf("    t_2way / t_kway      n=2^13     2^14     2^15     2^16\n");
    for (std::size_t k : ks) {
        std::printf("    k = %zu            ", k);
        for (std::size_t n : sizes) {
            const MatrixSpec spec{Family::Q, Variant::Identity, n};
            auto a = gaussian(n, n);
            const double t2 =
                min_time_seconds([&] { recursive_apply(spec, plan, a); }, 5);
            auto b = gaussian(n, n);
            const double tk =
                min_time_seconds([&] { kway_apply(spec, k, plan, b); }, 5);
            std::printf("  %7.4f", t2 / tk);
        }
        std::printf("\n");
    }
    std::fflush(stdout);
    report(10, "k-way matches two-way to 1e-11 at n = 2^13..2^16 (ratios above, reported only)",
           pass, "");
}

}  // namespace

int main() {
    std::printf("pascalx acceptance suite\n");
    const auto t0 = std::chrono::steady_clock::now();
    criteria_1_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d criterion(s) failed; total wall time %.1f s\n", g_failures, dt);
    return g_failures;
}
