// Benchmark and experiment front end: stability sweeps against the
// extended-precision oracle, timing sweeps, direct/solve ratio tables, the
// k-way ratio table, threshold tuning, and Bezier evaluation.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "pascalx/bezier.hpp"
#include "pascalx/fastmul.hpp"
#include "pascalx/oracle.hpp"
#include "pascalx/quadratic.hpp"
#include "pascalx/toeplitz.hpp"
#include "pascalx/tune.hpp"

namespace px = pascalx;

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> x(n);
    for (auto& v : x) v = gauss(rng);
    return x;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t n, unsigned trial) {
    return splitmix64(master ^ splitmix64(static_cast<std::uint64_t>(n) * 0x100000001b3ull + trial));
}

// --sizes accepts "a,b,c", "lo:hi:step", and "pow2:lo:hi".
std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    if (text.rfind("pow2:", 0) == 0) {
        std::size_t lo = 0, hi = 0;
        char colon = 0;
        std::istringstream ss(text.substr(5));
        if (!(ss >> lo >> colon >> hi) || colon != ':' || lo > hi || hi > 30)
            throw std::invalid_argument("bad pow2 size range '" + text + "'");
        for (std::size_t e = lo; e <= hi; ++e) sizes.push_back(std::size_t{1} << e);
        return sizes;
    }
    if (text.find(':') != std::string::npos) {
        std::size_t lo = 0, hi = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream ss(text);
        if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step == 0 || lo > hi)
            throw std::invalid_argument("bad size range '" + text + "'");
        for (std::size_t n = lo; n <= hi; n += step) sizes.push_back(n);
        return sizes;
    }
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        sizes.push_back(static_cast<std::size_t>(std::stoull(item)));
    }
    if (sizes.empty()) throw std::invalid_argument("no sizes given");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1])
            throw std::invalid_argument("sizes must be strictly increasing");
    return sizes;
}

struct Config {
    std::vector<std::size_t> sizes;
    unsigned trials = 10;
    std::uint64_t seed = 1;
    std::vector<std::string> methods{"quadratic", "recursive", "toeplitz"};
    std::string spec_text = "Q:identity";
    std::string out_path;
    std::string plan_path;
    std::string format = "table";
    unsigned digits = 50;
};

std::string method_suffix(const std::string& method) {
    if (method == "quadratic") return "small";
    if (method == "recursive") return "rec";
    if (method == "toeplitz") return "toep";
    throw std::invalid_argument("unknown method '" + method + "'");
}

std::string variant_token(px::Variant v) {
    switch (v) {
        case px::Variant::Identity: return "mult";
        case px::Variant::Transpose: return "multT";
        case px::Variant::Inverse: return "inv";
        case px::Variant::InverseTranspose: return "invT";
    }
    return "?";
}

px::RecursionPlan resolve_plan(const Config& cfg) {
    std::string path = cfg.plan_path;
    if (path.empty())
        if (const char* env = std::getenv("PASCALX_PLAN")) path = env;
    if (path.empty()) return px::RecursionPlan{};
    return px::load_plan(path);
}

class TableWriter {
  public:
    TableWriter(const std::string& out_path, bool csv) : csv_(csv) {
        if (!out_path.empty()) {
            file_.open(out_path);
            if (!file_) throw std::invalid_argument("cannot open output file " + out_path);
        }
    }
    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

    void comment(const std::string& line) { out() << "# " << line << "\n"; }
    void row(const std::vector<std::string>& cells) {
        auto& os = out();
        for (std::size_t i = 0; i < cells.size(); ++i)
            os << (i ? (csv_ ? "," : " ") : "") << cells[i];
        os << "\n";
    }

  private:
    bool csv_;
    std::ofstream file_;
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

std::vector<double> run_method(const std::string& method, const px::MatrixSpec& spec,
                               const px::RecursionPlan& plan, std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    if (method == "quadratic") {
        px::apply_quadratic(spec, px::Strategy::DirectMultiply, y);
    } else if (method == "recursive") {
        px::recursive_apply(spec, plan, y);
    } else if (method == "toeplitz") {
        const px::ToeplitzPlan tplan = px::make_toeplitz_plan(spec.n);
        y = px::toeplitz_apply(spec, tplan, x);
    } else {
        throw std::invalid_argument("unknown method '" + method + "'");
    }
    return y;
}

void write_config_header(TableWriter& w, const Config& cfg, const std::string& command) {
    w.comment("pascalx " + command);
    std::ostringstream meta;
    meta << "spec " << cfg.spec_text << " trials " << cfg.trials << " seed " << cfg.seed
         << " digits " << cfg.digits << " input N(0,1)";
    w.comment(meta.str());
}

int cmd_errors(const Config& cfg) {
    TableWriter w(cfg.out_path, cfg.format == "csv");
    const px::RecursionPlan plan = resolve_plan(cfg);
    write_config_header(w, cfg, "errors");
    std::vector<std::string> header{"N"};
    px::MatrixSpec proto = px::parse_spec(cfg.spec_text, 1);
    for (const auto& m : cfg.methods)
        header.push_back(px::to_string(proto.family) + "_" + variant_token(proto.variant) + "_" +
                         method_suffix(m));
    w.row(header);

    px::PrecisionConfig pcfg{cfg.digits};
    for (std::size_t n : cfg.sizes) {
        const px::MatrixSpec spec = px::parse_spec(cfg.spec_text, n);
        // one batched oracle sweep per size covers all trials
        std::vector<std::vector<double>> xs(cfg.trials), ys(cfg.trials);
        std::vector<px::OracleJob> jobs(cfg.trials);
        for (unsigned t = 0; t < cfg.trials; ++t) {
            xs[t] = gaussian_vector(n, trial_seed(cfg.seed, n, t));
            jobs[t] = px::OracleJob{spec.variant, xs[t], &ys[t]};
        }
        px::oracle_apply_batch(spec.family, n, jobs, pcfg);

        std::vector<std::string> cells{std::to_string(n)};
        for (const auto& method : cfg.methods) {
            double sum = 0.0;
            for (unsigned t = 0; t < cfg.trials; ++t) {
                const auto y_hat = run_method(method, spec, plan, xs[t]);
                sum += px::uniform_relative_error(ys[t], y_hat);
            }
            cells.push_back(fmt(sum / cfg.trials));
        }
        w.row(cells);
    }
    return 0;
}

int cmd_timings(const Config& cfg) {
    TableWriter w(cfg.out_path, cfg.format == "csv");
    const px::RecursionPlan plan = resolve_plan(cfg);
    write_config_header(w, cfg, "timings");
    std::vector<std::string> header{"N"};
    px::MatrixSpec proto = px::parse_spec(cfg.spec_text, 1);
    for (const auto& m : cfg.methods)
        header.push_back(px::to_string(proto.family) + "_" + variant_token(proto.variant) + "_" +
                         method_suffix(m));
    w.row(header);

    for (std::size_t n : cfg.sizes) {
        const px::MatrixSpec spec = px::parse_spec(cfg.spec_text, n);
        auto x = gaussian_vector(n, trial_seed(cfg.seed, n, 0));
        std::vector<std::string> cells{std::to_string(n)};
        for (const auto& method : cfg.methods) {
            double seconds;
            if (method == "quadratic") {
                auto buf = x;
                seconds = px::min_time_seconds(
                    [&] { px::apply_quadratic(spec, px::Strategy::DirectMultiply, buf); },
                    cfg.trials);
            } else if (method == "recursive") {
                auto buf = x;
                seconds = px::min_time_seconds([&] { px::recursive_apply(spec, plan, buf); },
                                               cfg.trials);
            } else if (method == "toeplitz") {
                const px::ToeplitzPlan tplan = px::make_toeplitz_plan(n);
                std::vector<double> y;
                seconds = px::min_time_seconds([&] { y = px::toeplitz_apply(spec, tplan, x); },
                                               cfg.trials);
            } else {
                throw std::invalid_argument("unknown method '" + method + "'");
            }
            cells.push_back(fmt(seconds));
        }
        w.row(cells);
    }
    return 0;
}

int cmd_ratio(const Config& cfg) {
    TableWriter w(cfg.out_path, cfg.format == "csv");
    write_config_header(w, cfg, "ratio direct/solve");
    w.row({"n", "normal", "transpose", "inverse", "invtrans"});
    const px::Variant variants[] = {px::Variant::Identity, px::Variant::Transpose,
                                    px::Variant::Inverse, px::Variant::InverseTranspose};
    for (std::size_t n : cfg.sizes) {
        std::vector<std::string> cells{std::to_string(n)};
        for (px::Variant v : variants) {
            const px::MatrixSpec spec{px::Family::Q, v, n};
            // cross-validate the two strategies before timing them
            auto x = gaussian_vector(n, trial_seed(cfg.seed, n, 0));
            auto a = x, b = x;
            px::apply_quadratic(spec, px::Strategy::DirectMultiply, a);
            px::apply_quadratic(spec, px::Strategy::Solve, b);
            if (px::uniform_relative_error(a, b) > 1e-10)
                throw std::runtime_error("direct/solve disagreement at n=" + std::to_string(n));

            auto buf = x;
            const double td = px::min_time_seconds(
                [&] { px::apply_quadratic(spec, px::Strategy::DirectMultiply, buf); }, cfg.trials);
            buf = x;
            const double ts = px::min_time_seconds(
                [&] { px::apply_quadratic(spec, px::Strategy::Solve, buf); }, cfg.trials);
            cells.push_back(fmt(td / ts));
        }
        w.row(cells);
    }
    return 0;
}

int cmd_kway(const Config& cfg) {
    TableWriter w(cfg.out_path, cfg.format == "csv");
    const px::RecursionPlan plan = resolve_plan(cfg);
    write_config_header(w, cfg, "kway ratio t_2way / t_kway");
    for (std::size_t n : cfg.sizes)
        if ((n & (n - 1)) != 0)
            throw std::invalid_argument("kway sizes must be powers of two");

    std::vector<std::string> header{"k"};
    for (std::size_t n : cfg.sizes) header.push_back("n" + std::to_string(n));
    w.row(header);

    const px::MatrixSpec proto = px::parse_spec(cfg.spec_text, 1);
    std::vector<double> two_way_time(cfg.sizes.size());
    for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
        const std::size_t n = cfg.sizes[i];
        const px::MatrixSpec spec = px::parse_spec(cfg.spec_text, n);
        auto buf = gaussian_vector(n, trial_seed(cfg.seed, n, 0));
        two_way_time[i] =
            px::min_time_seconds([&] { px::recursive_apply(spec, plan, buf); }, cfg.trials);
        (void)proto;
    }
    for (std::size_t k : {std::size_t{4}, std::size_t{6}, std::size_t{8}}) {
        std::vector<std::string> cells{std::to_string(k)};
        for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
            const std::size_t n = cfg.sizes[i];
            const px::MatrixSpec spec = px::parse_spec(cfg.spec_text, n);
            auto x = gaussian_vector(n, trial_seed(cfg.seed, n, 1));
            auto a = x, b = x;
            px::recursive_apply(spec, plan, a);
            px::kway_apply(spec, k, plan, b);
            if (px::uniform_relative_error(a, b) > 1e-11)
                throw std::runtime_error("kway/two-way disagreement at n=" + std::to_string(n));
            auto buf = x;
            const double tk = px::min_time_seconds(
                [&] { px::kway_apply(spec, k, plan, buf); }, cfg.trials);
            cells.push_back(fmt(two_way_time[i] / tk));
        }
        w.row(cells);
    }
    return 0;
}

int cmd_tune(const Config& cfg, std::size_t max_n, const std::string& synthetic) {
    px::FitReport report;
    if (!synthetic.empty()) {
        std::istringstream ss(synthetic);
        std::string item;
        std::vector<double> c;
        while (std::getline(ss, item, ',')) c.push_back(std::stod(item));
        if (c.size() != 6)
            throw std::invalid_argument("--synthetic wants a0,a1,a2,b0,b1,b2");
        report.model = px::CostModel{c[0], c[1], c[2], c[3], c[4], c[5]};
    } else {
        std::vector<std::size_t> sizes = cfg.sizes;
        if (sizes.empty())
            sizes = {32, 48, 64, 96, 128, 192, 256, 384, 512, 768, 1024, 1536, 2048, 3072, 4096};
        const auto samples = px::measure_costs(sizes, cfg.trials);
        report = px::fit_cost_model(samples);
    }
    const px::TuneResult result = px::solve_dynprog_fixed(report.model, max_n);
    std::cout << "A_n ~ " << report.model.a0 << " + " << report.model.a1 << " n + "
              << report.model.a2 << " n^2   (rel residual " << report.quad_residual << ")\n";
    std::cout << "B_n ~ " << report.model.b0 << " + " << report.model.b1 << " n + "
              << report.model.b2 << " n log2 n   (rel residual " << report.conv_residual << ")\n";
    if (result.threshold > result.max_n)
        std::cout << "N: no crossover up to " << result.max_n << "\n";
    else
        std::cout << "N " << result.threshold << "\n";
    if (!cfg.out_path.empty()) {
        px::save_plan(result, cfg.out_path);
        std::cout << "plan written to " << cfg.out_path << "\n";
    }
    return 0;
}

int cmd_bezier(const std::string& curve_path, const std::string& ts_text,
               const std::string& method, long long k_arg, bool check) {
    const px::BezierCurve curve = px::read_curve_file(curve_path);
    std::vector<double> ts;
    {
        std::istringstream ss(ts_text);
        std::string item;
        while (std::getline(ss, item, ',')) ts.push_back(std::stod(item));
    }
    if (ts.empty()) throw std::invalid_argument("no evaluation parameters given");

    std::vector<std::vector<double>> points;
    if (method == "decasteljau") {
        for (double t : ts) points.push_back(px::de_casteljau(curve, t));
    } else if (method == "fast" || method == "bernstein-fourier") {
        std::size_t k = method == "bernstein-fourier" ? 0
                        : k_arg >= 0 ? static_cast<std::size_t>(k_arg)
                                     : px::fast_eval_default_k(curve.degree);
        points = px::batch_eval(curve, ts, k);
    } else {
        throw std::invalid_argument("unknown method '" + method + "'");
    }

    std::cout.precision(17);
    for (const auto& p : points) {
        for (std::size_t d = 0; d < p.size(); ++d) std::cout << (d ? " " : "") << p[d];
        std::cout << "\n";
    }
    if (check) {
        double worst = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const auto ref = px::de_casteljau(curve, ts[i]);
            double num = 0.0, den = 0.0;
            for (std::size_t d = 0; d < ref.size(); ++d) {
                num = std::max(num, std::abs(ref[d] - points[i][d]));
                den = std::max(den, std::abs(ref[d]));
            }
            worst = std::max(worst, den > 0.0 ? num / den : num);
        }
        std::cout << "# max relative error vs de casteljau: " << worst << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pascal/Bernstein structured-matrix benchmarks"};
    app.require_subcommand(1);

    Config cfg;
    std::string sizes_text;

    auto add_common = [&](CLI::App* sub, bool with_methods) {
        sub->add_option("--sizes", sizes_text, "comma list, lo:hi:step, or pow2:lo:hi");
        sub->add_option("--trials", cfg.trials, "trials per measurement");
        sub->add_option("--seed", cfg.seed, "master RNG seed");
        sub->add_option("--out", cfg.out_path, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "table|csv")
            ->check(CLI::IsMember({"table", "csv"}));
        sub->add_option("--plan", cfg.plan_path, "tuning plan file (else $PASCALX_PLAN)");
        sub->add_option("--digits", cfg.digits, "oracle decimal digits");
        if (with_methods)
            sub->add_option("--methods", cfg.methods, "subset of quadratic,recursive,toeplitz")
                ->delimiter(',');
        sub->add_option("--spec", cfg.spec_text, "matrix spec, e.g. Q:inverse_transpose");
    };

    auto* errors = app.add_subcommand("errors", "mean uniform relative error vs the oracle");
    add_common(errors, true);
    auto* timings = app.add_subcommand("timings", "minimum wall time per method");
    add_common(timings, true);
    auto* ratio = app.add_subcommand("ratio", "direct/solve runtime ratios for Q variants");
    add_common(ratio, false);
    auto* kway = app.add_subcommand("kway", "two-way vs k-way runtime ratio table");
    add_common(kway, false);

    auto* tune = app.add_subcommand("tune", "measure costs, fit the model, solve for N");
    std::size_t tune_max_n = std::size_t{1} << 20;
    std::string synthetic;
    add_common(tune, false);
    tune->add_option("--max-n", tune_max_n, "DP table size");
    tune->add_option("--synthetic", synthetic, "a0,a1,a2,b0,b1,b2 (skip measurement)");

    auto* bezier = app.add_subcommand("bezier", "evaluate a Bezier curve from a file");
    std::string curve_path, ts_text, bez_method = "fast";
    long long k_arg = -1;
    bool check = false;
    bezier->add_option("--curve", curve_path, "curve file")->required();
    bezier->add_option("--ts", ts_text, "comma-separated parameters in [0,1]")->required();
    bezier->add_option("--method", bez_method, "decasteljau|fast|bernstein-fourier");
    bezier->add_option("--k", k_arg, "surviving degree for fast (default sqrt(n log n))");
    bezier->add_flag("--check", check, "cross-validate against de casteljau");

    try {
        app.parse(argc, argv);
        if (!sizes_text.empty()) cfg.sizes = parse_sizes(sizes_text);

        if (errors->parsed() || timings->parsed() || ratio->parsed() || kway->parsed()) {
            if (cfg.sizes.empty()) throw std::invalid_argument("--sizes is required");
            if (cfg.trials < 1) throw std::invalid_argument("--trials must be >= 1");
        }
        if (errors->parsed()) return cmd_errors(cfg);
        if (timings->parsed()) return cmd_timings(cfg);
        if (ratio->parsed()) return cmd_ratio(cfg);
        if (kway->parsed()) return cmd_kway(cfg);
        if (tune->parsed()) return cmd_tune(cfg, tune_max_n, synthetic);
        if (bezier->parsed()) return cmd_bezier(curve_path, ts_text, bez_method, k_arg, check);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    }
}
