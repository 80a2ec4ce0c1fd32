#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "pascalx/bezier.hpp"
#include "pascalx/quadratic.hpp"
#include "pascalx/tune.hpp"
#include "test_util.hpp"

using namespace pascalx;
using testutil::gaussian;
using testutil::rel_err;

namespace {

BezierCurve random_curve(std::size_t degree, std::size_t dim, std::uint64_t seed) {
    BezierCurve c;
    c.degree = degree;
    c.dim = dim;
    c.points = gaussian((degree + 1) * dim, seed);
    return c;
}

double point_err(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(a[i]));
    }
    return den > 0.0 ? num / den : num;
}

}  // namespace

TEST_CASE("bernstein_poly") {
    CHECK(bernstein_poly(2, 1, 0.5) == 0.5);
    CHECK(bernstein_poly(9, 0, 0.0) == 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i <= 5; ++i) sum += bernstein_poly(5, i, 0.3);
    CHECK(std::abs(sum - 1.0) <= 1e-15);
    CHECK_THROWS_AS(bernstein_poly(3, 4, 0.5), std::out_of_range);
    CHECK_THROWS_AS(bernstein_poly(3, 1, 1.5), std::invalid_argument);
}

TEST_CASE("de casteljau basics") {
    BezierCurve line;
    line.degree = 1;
    line.dim = 2;
    line.points = {0.0, 1.0, 2.0, 5.0};
    const auto mid = de_casteljau(line, 0.25);
    CHECK(mid[0] == doctest::Approx(0.5));
    CHECK(mid[1] == doctest::Approx(2.0));

    BezierCurve quad;
    quad.degree = 2;
    quad.dim = 2;
    quad.points = {0, 0, 1, 0, 1, 1};
    const auto p = de_casteljau(quad, 0.5);
    CHECK(p[0] == doctest::Approx(0.75));
    CHECK(p[1] == doctest::Approx(0.25));

    const auto c = random_curve(17, 3, 5);
    const auto at0 = de_casteljau(c, 0.0);
    const auto at1 = de_casteljau(c, 1.0);
    for (std::size_t d = 0; d < 3; ++d) {
        CHECK(at0[d] == c.at(0, d));
        CHECK(at1[d] == c.at(17, d));
    }
    CHECK_THROWS_AS(de_casteljau(c, -0.1), std::invalid_argument);
}

TEST_CASE("bernstein matrix at one half is the normalized Pascal matrix") {
    const std::size_t degree = 300;  // above the default threshold
    auto data = gaussian(degree + 1, 9);
    auto want = data;
    RecursionPlan plan;
    plan.threshold = 64;
    bernstein_matrix_apply({0.5, degree}, data, 1, plan);
    apply_quadratic({Family::Q, Variant::Identity, degree + 1}, Strategy::DirectMultiply, want);
    CHECK(rel_err(want, data) <= 1e-12);
}

TEST_CASE("bernstein matrix columns and row sums") {
    const std::size_t degree = 40;
    const double t = 0.3;
    std::vector<double> e0(degree + 1, 0.0);
    e0[0] = 1.0;
    bernstein_matrix_apply({t, degree}, e0, 1);
    for (std::size_t i = 0; i <= degree; ++i)
        CHECK(e0[i] == doctest::Approx(std::pow(1.0 - t, static_cast<double>(i))).epsilon(1e-12));

    std::vector<double> ones(degree + 1, 1.0);
    bernstein_matrix_apply({t, degree}, ones, 1);
    for (double v : ones) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));

    // rows hold the lower-degree Bernstein values
    std::vector<double> e1(degree + 1, 0.0);
    e1[3] = 1.0;
    bernstein_matrix_apply({t, degree}, e1, 1);
    for (std::size_t i = 0; i <= degree; ++i) {
        const double want = i >= 3 ? bernstein_poly(i, 3, t) : 0.0;
        CHECK(e1[i] == doctest::Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("fast_eval degenerate k") {
    const auto c = random_curve(200, 2, 33);
    for (double t : {0.0, 0.37, 1.0}) {
        CHECK(fast_eval(c, t, c.degree) == de_casteljau(c, t));  // bitwise
    }
}

TEST_CASE("fast_eval matches de casteljau") {
    const auto c = random_curve(512, 3, 21);
    const double t = 0.37;
    const auto ref = de_casteljau(c, t);
    for (std::size_t k : {std::size_t{0}, fast_eval_default_k(512), std::size_t{512}}) {
        const auto got = fast_eval(c, t, k);
        INFO("k=", k);
        CHECK(point_err(ref, got) <= 1e-12);
    }
    CHECK_THROWS_AS(fast_eval(c, 0.5, 513), std::invalid_argument);
    CHECK_THROWS_AS(fast_eval(c, 1.5, 0), std::invalid_argument);
}

TEST_CASE("batch_eval matches per-point evaluation") {
    const auto c = random_curve(300, 2, 55);
    const std::size_t k = fast_eval_default_k(300);

    const std::vector<double> single{0.41};
    const auto batch1 = batch_eval(c, single, k);
    CHECK(batch1[0] == fast_eval(c, 0.41, k));  // bitwise: same pipeline

    std::vector<double> ts;
    for (int i = 0; i <= 40; ++i) ts.push_back(i / 40.0);
    const auto batch = batch_eval(c, ts, k);
    for (std::size_t i = 0; i < ts.size(); ++i)
        CHECK(point_err(fast_eval(c, ts[i], k), batch[i]) <= 1e-13);

    const std::vector<double> ends{0.0, 1.0};
    const auto pts = batch_eval(c, ends, k);
    for (std::size_t d = 0; d < c.dim; ++d) {
        CHECK(pts[0][d] == doctest::Approx(c.at(0, d)).epsilon(1e-13));
        CHECK(pts[1][d] == doctest::Approx(c.at(c.degree, d)).epsilon(1e-13));
    }
}

TEST_CASE("batch evaluation amortizes the forward transforms") {
    const auto c = random_curve(1024, 2, 77);
    std::vector<double> ts;
    for (int i = 0; i < 100; ++i) ts.push_back((i + 0.5) / 100.0);
    const std::size_t k = fast_eval_default_k(1024);

    const auto batch = batch_eval(c, ts, k);
    for (std::size_t i = 0; i < ts.size(); i += 7)
        CHECK(point_err(fast_eval(c, ts[i], k), batch[i]) <= 1e-13);

    const double t_batch = min_time_seconds([&] { (void)batch_eval(c, ts, k); }, 3);
    const double t_single = min_time_seconds(
        [&] {
            for (double t : ts) (void)fast_eval(c, t, k);
        },
        3);
    MESSAGE("batch ", t_batch, " s vs per-point ", t_single, " s");
    CHECK(t_batch < 0.8 * t_single);
}

TEST_CASE("affine invariance and convex hull") {
    const auto c = random_curve(64, 2, 11);
    BezierCurve mapped = c;
    // x' = 2x - y + 1, y' = 0.5x + 3y - 2
    for (std::size_t i = 0; i <= c.degree; ++i) {
        mapped.at(i, 0) = 2.0 * c.at(i, 0) - c.at(i, 1) + 1.0;
        mapped.at(i, 1) = 0.5 * c.at(i, 0) + 3.0 * c.at(i, 1) - 2.0;
    }
    for (double t : {0.1, 0.5, 0.83}) {
        const auto p = de_casteljau(c, t);
        const auto q = de_casteljau(mapped, t);
        CHECK(q[0] == doctest::Approx(2.0 * p[0] - p[1] + 1.0).epsilon(1e-12));
        CHECK(q[1] == doctest::Approx(0.5 * p[0] + 3.0 * p[1] - 2.0).epsilon(1e-12));
    }

    // convex hull: coordinates inside [0,1]^d stay inside with tiny slack
    BezierCurve hull = random_curve(33, 3, 13);
    for (auto& v : hull.points) v = 0.5 + 0.5 * std::tanh(v);
    for (double t : {0.0, 0.21, 0.5, 0.77, 1.0}) {
        for (const auto& p : {de_casteljau(hull, t), fast_eval(hull, t)}) {
            for (double v : p) {
                CHECK(v >= 0.0 - 1e-12);
                CHECK(v <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("degree-1 exactness across evaluators") {
    BezierCurve line;
    line.degree = 1;
    line.dim = 3;
    line.points = {1.0, -2.0, 0.25, 4.0, 7.0, -1.5};
    for (double t : {0.0, 0.25, 0.6, 1.0}) {
        std::vector<double> want(3);
        for (std::size_t d = 0; d < 3; ++d)
            want[d] = (1.0 - t) * line.points[d] + t * line.points[3 + d];
        for (const auto& p : {de_casteljau(line, t), fast_eval(line, t, 0), fast_eval(line, t, 1)}) {
            for (std::size_t d = 0; d < 3; ++d)
                CHECK(p[d] == doctest::Approx(want[d]).epsilon(1e-15));
        }
    }
}

TEST_CASE("curve i/o round trip") {
    const auto c = random_curve(9, 3, 99);
    std::stringstream ss;
    write_curve(c, ss);
    const BezierCurve back = read_curve(ss);
    CHECK(back.degree == c.degree);
    CHECK(back.dim == c.dim);
    CHECK(back.points == c.points);

    std::stringstream bad("2 0\n1 2 3\n");
    CHECK_THROWS_AS(read_curve(bad), std::invalid_argument);
    std::stringstream truncated("2 2\n1 2\n3 4\n");
    CHECK_THROWS_AS(read_curve(truncated), std::invalid_argument);
}
