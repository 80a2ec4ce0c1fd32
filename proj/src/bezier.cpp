#include "pascalx/bezier.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pascalx/binomial.hpp"
#include "pascalx/conv.hpp"
#include "pascalx/fft.hpp"

namespace pascalx {
namespace {

void check_t(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("bezier: t outside [0, 1]");
}

// B^(t) applied to a row block: the convex-combination sweeps of the
// bidiagonal factors, vectorized over the d columns of each row.
void bernstein_sweeps(std::span<double> data, std::size_t rows, std::size_t dim, double t) {
    const double u = 1.0 - t;
    for (std::size_t k = 1; k < rows; ++k) {
        for (std::size_t j = rows - 1; j >= k; --j) {
            double* row = data.data() + j * dim;
            const double* prev = row - dim;
            for (std::size_t c = 0; c < dim; ++c) row[c] = u * prev[c] + t * row[c];
        }
    }
}

void rec_bernstein(std::span<double> data, std::size_t rows, std::size_t dim, double t,
                   const RecursionPlan& plan, std::vector<double>& col, ConvWorkspace& ws) {
    if (rows <= plan.threshold || rows < 2) {
        bernstein_sweeps(data, rows, dim, t);
        return;
    }
    const std::size_t m = plan.split(rows);
    const ConvKernel kernel = make_bernstein_kernel(static_cast<int>(m), t);
    col.resize(rows);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t i = 0; i < rows; ++i) col[i] = data[i * dim + c];
        std::span<double> tail(col.data() + m, rows - m);
        conv_valid(kernel, std::span<const double>(col.data(), rows), tail, ConvPath::Fft, ws);
        for (std::size_t i = m; i < rows; ++i) data[i * dim + c] = col[i];
    }
    rec_bernstein(data.subspan(m * dim), rows - m, dim, t, plan, col, ws);
    rec_bernstein(data.first(m * dim), m, dim, t, plan, col, ws);
}

}  // namespace

BezierCurve read_curve(std::istream& in) {
    long long n = -1, d = -1;
    if (!(in >> n >> d) || n < 0 || d < 1)
        throw std::invalid_argument("curve: bad header (want 'n d')");
    BezierCurve curve;
    curve.degree = static_cast<std::size_t>(n);
    curve.dim = static_cast<std::size_t>(d);
    curve.points.resize((curve.degree + 1) * curve.dim);
    for (auto& v : curve.points) {
        if (!(in >> v)) throw std::invalid_argument("curve: short point data");
        if (!std::isfinite(v)) throw std::invalid_argument("curve: non-finite control point");
    }
    return curve;
}

BezierCurve read_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("curve: cannot open " + path);
    return read_curve(in);
}

void write_curve(const BezierCurve& curve, std::ostream& out) {
    out << curve.degree << " " << curve.dim << "\n";
    out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i <= curve.degree; ++i) {
        for (std::size_t d = 0; d < curve.dim; ++d)
            out << (d ? " " : "") << curve.at(i, d);
        out << "\n";
    }
}

double bernstein_poly(std::size_t n, std::size_t i, double t) {
    if (i > n) throw std::out_of_range("bernstein_poly: index beyond degree");
    check_t(t);
    const long double lt = static_cast<long double>(t);
    const long double lu = 1.0L - lt;
    const long double v = binomial_ld(n, i) * powl(lt, static_cast<long double>(i)) *
                          powl(lu, static_cast<long double>(n - i));
    return static_cast<double>(v);
}

void bernstein_matrix_apply(const BernsteinMatrixSpec& spec, std::span<double> data,
                            std::size_t dim, const RecursionPlan& plan) {
    check_t(spec.t);
    plan.validate();
    const std::size_t rows = spec.degree + 1;
    if (dim == 0 || data.size() != rows * dim)
        throw std::invalid_argument("bernstein_matrix_apply: shape mismatch");
    thread_local ConvWorkspace ws;
    thread_local std::vector<double> col;
    rec_bernstein(data, rows, dim, spec.t, plan, col, ws);
}

std::vector<double> de_casteljau(const BezierCurve& curve, double t) {
    check_t(t);
    std::vector<double> work = curve.points;
    bernstein_sweeps(work, curve.degree + 1, curve.dim, t);
    return {work.end() - static_cast<std::ptrdiff_t>(curve.dim), work.end()};
}

std::size_t fast_eval_default_k(std::size_t degree) {
    const double n = static_cast<double>(degree);
    const auto k = static_cast<std::size_t>(std::llround(std::sqrt(n * std::log2(n + 2.0))));
    return std::min(k, degree);
}

std::vector<double> fast_eval(const BezierCurve& curve, double t, std::size_t k) {
    check_t(t);
    if (k > curve.degree) throw std::invalid_argument("fast_eval: k beyond degree");
    const std::size_t n = curve.degree;
    const std::size_t m = n - k;
    if (m == 0) return de_casteljau(curve, t);

    const std::size_t rows = n + 1;
    const ConvKernel kernel = make_bernstein_kernel(static_cast<int>(m), t);
    thread_local ConvWorkspace ws;
    std::vector<double> col(rows);
    BezierCurve survivors;
    survivors.degree = k;
    survivors.dim = curve.dim;
    survivors.points.resize((k + 1) * curve.dim);
    for (std::size_t c = 0; c < curve.dim; ++c) {
        for (std::size_t i = 0; i < rows; ++i) col[i] = curve.at(i, c);
        std::vector<double> out(k + 1);
        conv_valid(kernel, col, out, ConvPath::Fft, ws);
        for (std::size_t i = 0; i <= k; ++i) survivors.at(i, c) = out[i];
    }
    return de_casteljau(survivors, t);
}

std::vector<double> fast_eval(const BezierCurve& curve, double t) {
    return fast_eval(curve, t, fast_eval_default_k(curve.degree));
}

std::vector<std::vector<double>> batch_eval(const BezierCurve& curve, std::span<const double> ts,
                                            std::size_t k) {
    if (ts.empty()) throw std::invalid_argument("batch_eval: no parameters");
    for (double t : ts) check_t(t);
    if (k > curve.degree) throw std::invalid_argument("batch_eval: k beyond degree");
    const std::size_t n = curve.degree;
    const std::size_t m = n - k;
    std::vector<std::vector<double>> out;
    out.reserve(ts.size());
    if (m == 0) {
        for (double t : ts) out.push_back(de_casteljau(curve, t));
        return out;
    }

    // Forward transforms of the control columns are t-independent: do them
    // once. Per t only the kernel symbol, the pointwise multiply, and the
    // inverse transforms remain.
    const std::size_t L = n + 1;
    const std::size_t half = L / 2 + 1;
    RealFft& fft = default_fft();
    std::vector<std::vector<std::complex<double>>> columns(curve.dim);
    {
        std::vector<double> col(L);
        for (std::size_t c = 0; c < curve.dim; ++c) {
            for (std::size_t i = 0; i < L; ++i) col[i] = curve.at(i, c);
            columns[c].resize(half);
            fft.forward(L, col.data(), columns[c].data());
        }
    }
    std::vector<std::complex<double>> mult(half), spec(half);
    std::vector<double> real(L);
    const double scale = 1.0 / static_cast<double>(L);
    BezierCurve survivors;
    survivors.degree = k;
    survivors.dim = curve.dim;
    survivors.points.resize((k + 1) * curve.dim);
    for (double t : ts) {
        circulant_multiplier(KernelKind::Bernstein, static_cast<int>(m), t, L,
                             /*conjugated=*/true, mult.data());
        for (std::size_t c = 0; c < curve.dim; ++c) {
            for (std::size_t j = 0; j < half; ++j) spec[j] = columns[c][j] * mult[j];
            fft.inverse(L, spec.data(), real.data());
            for (std::size_t i = 0; i <= k; ++i) survivors.at(i, c) = real[i] * scale;
        }
        out.push_back(de_casteljau(survivors, t));
    }
    return out;
}

std::vector<std::vector<double>> batch_eval(const BezierCurve& curve, std::span<const double> ts) {
    return batch_eval(curve, ts, fast_eval_default_k(curve.degree));
}

}  // namespace pascalx
