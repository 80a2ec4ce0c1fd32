#include "pascalx/tune.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "pascalx/conv.hpp"
#include "pascalx/quadratic.hpp"

namespace pascalx {
namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// Least squares of b against the three given basis columns, with column
// scaling so the normal system stays well conditioned across n ranges.
void fit3(const std::vector<double>& c0, const std::vector<double>& c1,
          const std::vector<double>& c2, const std::vector<double>& b, double* coeffs,
          double* residual) {
    const auto rows = static_cast<Eigen::Index>(b.size());
    Eigen::MatrixXd design(rows, 3);
    Eigen::VectorXd rhs(rows);
    double scale[3] = {0.0, 0.0, 0.0};
    for (Eigen::Index i = 0; i < rows; ++i) {
        scale[0] = std::max(scale[0], std::abs(c0[i]));
        scale[1] = std::max(scale[1], std::abs(c1[i]));
        scale[2] = std::max(scale[2], std::abs(c2[i]));
    }
    for (int j = 0; j < 3; ++j)
        if (scale[j] == 0.0) scale[j] = 1.0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        design(i, 0) = c0[i] / scale[0];
        design(i, 1) = c1[i] / scale[1];
        design(i, 2) = c2[i] / scale[2];
        rhs(i) = b[i];
    }
    Eigen::VectorXd sol = design.colPivHouseholderQr().solve(rhs);
    for (int j = 0; j < 3; ++j) coeffs[j] = sol(j) / scale[j];
    const double denom = rhs.norm();
    *residual = denom > 0.0 ? (design * sol - rhs).norm() / denom : 0.0;
}

}  // namespace

double min_time_seconds(const std::function<void()>& fn, unsigned trials) {
    std::size_t reps = 1;
    for (;;) {
        const double t0 = now_seconds();
        for (std::size_t r = 0; r < reps; ++r) fn();
        const double dt = now_seconds() - t0;
        if (dt >= 1e-3) break;
        reps = dt <= 1e-5 ? reps * 16 : reps * 2;
    }
    double best = std::numeric_limits<double>::infinity();
    for (unsigned t = 0; t < trials; ++t) {
        const double t0 = now_seconds();
        for (std::size_t r = 0; r < reps; ++r) fn();
        best = std::min(best, (now_seconds() - t0) / static_cast<double>(reps));
    }
    return best;
}

std::vector<CostSample> measure_costs(std::span<const std::size_t> sizes, unsigned trials) {
    if (sizes.empty()) throw std::invalid_argument("measure_costs: no sizes");
    if (trials < 3) throw std::invalid_argument("measure_costs: need trials >= 3");

    std::vector<CostSample> samples;
    samples.reserve(sizes.size());
    std::mt19937_64 rng(0x9D2C5680u);
    std::normal_distribution<double> gauss;
    ConvWorkspace ws;
    for (std::size_t n : sizes) {
        if (n < 2) throw std::invalid_argument("measure_costs: sizes must be >= 2");
        std::vector<double> x(n);
        for (auto& v : x) v = gauss(rng);
        CostSample s;
        s.n = n;
        const MatrixSpec spec{Family::Q, Variant::Identity, n};
        s.quad_seconds = min_time_seconds(
            [&] { apply_quadratic(spec, Strategy::DirectMultiply, std::span<double>(x)); },
            trials);

        const std::size_t m = n / 2;
        const ConvKernel kernel = make_kernel(KernelKind::BinomialNormalized, static_cast<int>(m));
        std::vector<double> out(n - m);
        // warm the FFT plan so planning time stays out of the measurement
        conv_valid(kernel, x, out, ConvPath::Fft, ws);
        s.conv_seconds = min_time_seconds(
            [&] { conv_valid(kernel, x, std::span<double>(out), ConvPath::Fft, ws); }, trials);
        samples.push_back(s);
    }
    return samples;
}

FitReport fit_cost_model(std::span<const CostSample> samples) {
    std::set<std::size_t> distinct;
    for (const auto& s : samples) distinct.insert(s.n);
    if (distinct.size() < 3)
        throw std::invalid_argument("fit_cost_model: need at least 3 distinct sizes");

    const std::size_t rows = samples.size();
    std::vector<double> ones(rows, 1.0), lin(rows), quad(rows), nlogn(rows), av(rows), bv(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const double n = static_cast<double>(samples[i].n);
        lin[i] = n;
        quad[i] = n * n;
        nlogn[i] = n * (samples[i].n > 1 ? std::log2(n) : 0.0);
        av[i] = samples[i].quad_seconds;
        bv[i] = samples[i].conv_seconds;
    }
    FitReport report;
    double ca[3], cb[3];
    fit3(ones, lin, quad, av, ca, &report.quad_residual);
    fit3(ones, lin, nlogn, bv, cb, &report.conv_residual);
    report.model = CostModel{ca[0], ca[1], ca[2], cb[0], cb[1], cb[2]};
    return report;
}

RecursionPlan TuneResult::to_plan(bool keep_splits) const {
    RecursionPlan plan;
    plan.threshold = threshold;
    if (keep_splits) plan.splits = splits;
    return plan;
}

namespace {

TuneResult solve_dynprog(const CostModel& model, std::size_t max_n, bool free_split,
                         bool full_range) {
    if (max_n < 2) throw std::invalid_argument("solve_dynprog: need max_n >= 2");
    TuneResult r;
    r.max_n = max_n;
    r.costs.assign(max_n + 1, 0.0);
    r.splits.assign(max_n + 1, 0);
    std::vector<double> quad(max_n + 1, 0.0), conv(max_n + 1, 0.0);
    for (std::size_t n = 1; n <= max_n; ++n) {
        quad[n] = model.quad(n);
        conv[n] = model.conv(n);
    }
    r.costs[1] = quad[1];
    for (std::size_t n = 2; n <= max_n; ++n) {
        double best = quad[n];
        std::uint32_t best_m = 0;
        const std::size_t lo = free_split ? (full_range ? 1 : std::max<std::size_t>(1, n / 4)) : n / 2;
        const std::size_t hi = free_split ? (full_range ? n - 1 : std::min(n - 1, 3 * n / 4)) : n / 2;
        for (std::size_t m = lo; m <= hi; ++m) {
            const double c = r.costs[m] + r.costs[n - m] + conv[n];
            if (c < best) {
                best = c;
                best_m = static_cast<std::uint32_t>(m);
            }
        }
        r.costs[n] = best;
        r.splits[n] = best_m;
    }
    r.threshold = max_n + 1;
    for (std::size_t n = 1; n <= max_n; ++n) {
        if (quad[n] > r.costs[n]) {
            r.threshold = n;
            break;
        }
    }
    return r;
}

}  // namespace

TuneResult solve_dynprog_fixed(const CostModel& model, std::size_t max_n) {
    return solve_dynprog(model, max_n, false, false);
}

TuneResult solve_dynprog_free(const CostModel& model, std::size_t max_n, bool full_range) {
    return solve_dynprog(model, max_n, true, full_range);
}

std::vector<double> kway_first_level_costs(const CostModel& model, const TuneResult& two_way,
                                           std::size_t n, std::size_t k_max) {
    if (n > two_way.max_n) throw std::invalid_argument("kway_first_level_costs: n beyond table");
    // G[j][c]: best cost of covering the length-c prefix with j first-level
    // parts, paying conv(c_i) to push each part past the part before it.
    std::vector<double> costs(k_max + 1, std::numeric_limits<double>::infinity());
    std::vector<double> prev(n + 1), cur(n + 1);
    for (std::size_t c = 1; c <= n; ++c) prev[c] = two_way.costs[c];
    costs[1] = prev[n];
    for (std::size_t j = 2; j <= k_max; ++j) {
        for (std::size_t c = 1; c <= n; ++c) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t m = j - 1; m < c; ++m)
                best = std::min(best, prev[m] + two_way.costs[c - m] + model.conv(c));
            cur[c] = best;
        }
        costs[j] = cur[n];
        std::swap(prev, cur);
    }
    return costs;
}

void save_plan(const TuneResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw PlanIoError("save_plan: cannot open " + path.string());
    out << "version 1\n";
    out << "N " << result.threshold << "\n";
    out << "maxn " << result.max_n << "\n";
    for (std::size_t n = 0; n < result.splits.size(); ++n) {
        // only non-default splits need recording
        if (result.splits[n] != 0 && result.splits[n] != n / 2)
            out << "split " << n << " " << result.splits[n] << "\n";
    }
    if (!out.flush()) throw PlanIoError("save_plan: write failed for " + path.string());
}

RecursionPlan load_plan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PlanIoError("load_plan: cannot open " + path.string());
    std::string line;
    bool have_version = false, have_n = false;
    std::size_t threshold = 0, max_n = 0;
    std::vector<std::pair<std::size_t, std::uint32_t>> splits;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        auto fail = [&](const std::string& why) {
            throw PlanParseError("load_plan: " + path.string() + ":" + std::to_string(lineno) +
                                 ": " + why);
        };
        if (key == "version") {
            int v = -1;
            if (!(ss >> v) || v != 1) fail("unsupported version");
            have_version = true;
        } else if (key == "N") {
            long long v = -1;
            if (!(ss >> v) || v < 1) fail("invalid threshold");
            threshold = static_cast<std::size_t>(v);
            have_n = true;
        } else if (key == "maxn") {
            long long v = -1;
            if (!(ss >> v) || v < 1) fail("invalid maxn");
            max_n = static_cast<std::size_t>(v);
        } else if (key == "split") {
            long long n = -1, m = -1;
            if (!(ss >> n >> m) || n < 2 || m < 1 || m >= n) fail("invalid split entry");
            splits.emplace_back(static_cast<std::size_t>(n), static_cast<std::uint32_t>(m));
        } else {
            fail("unknown key '" + key + "'");
        }
        std::string rest;
        if (ss >> rest) fail("trailing tokens");
    }
    if (!have_version) throw PlanParseError("load_plan: " + path.string() + ": missing version");
    if (!have_n) throw PlanParseError("load_plan: " + path.string() + ": missing N");

    RecursionPlan plan;
    plan.threshold = threshold;
    if (!splits.empty()) {
        std::size_t top = max_n;
        for (const auto& [n, m] : splits) top = std::max(top, n);
        plan.splits.assign(top + 1, 0);
        for (const auto& [n, m] : splits) plan.splits[n] = m;
    }
    plan.validate();
    return plan;
}

}  // namespace pascalx
