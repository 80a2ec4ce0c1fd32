#include "pascalx/oracle.hpp"

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <thread>

namespace pascalx {
namespace {

mpfr_prec_t working_precision(const PrecisionConfig& cfg, std::size_t n) {
    if (cfg.decimal_digits == 0)
        throw std::invalid_argument("PrecisionConfig: decimal_digits must be >= 1");
    const double bits = std::ceil(static_cast<double>(cfg.decimal_digits) * 3.3219280948873623);
    const double guard = std::ceil(std::log2(static_cast<double>(n) + 2.0)) + 8.0;
    return static_cast<mpfr_prec_t>(bits + guard);
}

class MpArray {
  public:
    MpArray(std::size_t count, mpfr_prec_t prec) : vals_(count) {
        for (auto& v : vals_) mpfr_init2(&v, prec);
    }
    ~MpArray() {
        for (auto& v : vals_) mpfr_clear(&v);
    }
    MpArray(const MpArray&) = delete;
    MpArray& operator=(const MpArray&) = delete;

    mpfr_ptr operator[](std::size_t i) { return &vals_[i]; }
    std::size_t size() const { return vals_.size(); }

  private:
    std::vector<__mpfr_struct> vals_;
};

// Every variant's entries are +/- 2^(a i + b j) C(.,.) for the streamed
// lower-triangle binomials C(r, c); the per-index scalings below are exact
// sign flips and power-of-two shifts.
struct VariantScaling {
    bool column_output;  // transpose-direction jobs emit y indexed by c
    long pre_shift;      // input scaled by 2^(pre_shift * index)
    bool pre_alternate;  // input scaled by (-1)^index
    long post_shift;     // output scaled likewise
    bool post_alternate;
};

VariantScaling scaling_for(Family family, Variant variant) {
    const bool q = family == Family::Q;
    switch (variant) {
        case Variant::Identity: return {false, 0, false, q ? -1L : 0L, false};
        case Variant::Transpose: return {true, q ? -1L : 0L, false, 0, false};
        case Variant::Inverse: return {false, q ? 1L : 0L, true, 0, true};
        case Variant::InverseTranspose: return {true, 0, true, q ? 1L : 0L, true};
    }
    return {};
}

struct PreparedJob {
    VariantScaling scaling;
    const OracleJob* job;
    std::unique_ptr<MpArray> pre;  // prescaled input (row-direction jobs)
    std::unique_ptr<MpArray> acc;  // per-column accumulators (column-direction)
};

void prescale(mpfr_ptr out, double x, long shift, bool alternate, std::size_t index) {
    mpfr_set_d(out, x, MPFR_RNDN);
    if (shift != 0) mpfr_mul_2si(out, out, shift * static_cast<long>(index), MPFR_RNDN);
    if (alternate && (index & 1)) mpfr_neg(out, out, MPFR_RNDN);
}

double postscale(mpfr_ptr v, long shift, bool alternate, std::size_t index) {
    if (shift != 0) mpfr_mul_2si(v, v, shift * static_cast<long>(index), MPFR_RNDN);
    double d = mpfr_get_d(v, MPFR_RNDN);
    if (alternate && (index & 1)) d = -d;
    return d;
}

// One thread's share: stream the Pascal rows once (exact adds at working
// precision) and fold every assigned job into the pass.
void run_jobs(std::size_t n, mpfr_prec_t prec,
              std::span<PreparedJob*> jobs) {
    MpArray row(n, prec);
    MpArray tmp(2, prec);
    mpfr_ptr acc = tmp[0];
    mpfr_ptr scaled = tmp[1];

    for (auto* pj : jobs) {
        const auto& sc = pj->scaling;
        if (sc.column_output) {
            pj->acc = std::make_unique<MpArray>(n, prec);
            for (std::size_t c = 0; c < n; ++c) mpfr_set_zero((*pj->acc)[c], 0);
        } else {
            pj->pre = std::make_unique<MpArray>(n, prec);
            for (std::size_t c = 0; c < n; ++c)
                prescale((*pj->pre)[c], pj->job->x[c], sc.pre_shift, sc.pre_alternate, c);
        }
    }

    for (std::size_t r = 0; r < n; ++r) {
        // row <- next Pascal row, in place (descending keeps the old values
        // live exactly as long as they are needed)
        mpfr_set_ui(row[r], 1, MPFR_RNDN);
        for (std::size_t c = r >= 1 ? r - 1 : 0; c >= 1; --c)
            mpfr_add(row[c], row[c], row[c - 1], MPFR_RNDN);

        for (auto* pj : jobs) {
            const auto& sc = pj->scaling;
            if (sc.column_output) {
                prescale(scaled, pj->job->x[r], sc.pre_shift, sc.pre_alternate, r);
                for (std::size_t c = 0; c <= r; ++c)
                    mpfr_fma((*pj->acc)[c], row[c], scaled, (*pj->acc)[c], MPFR_RNDN);
            } else {
                mpfr_set_zero(acc, 0);
                for (std::size_t c = 0; c <= r; ++c)
                    mpfr_fma(acc, row[c], (*pj->pre)[c], acc, MPFR_RNDN);
                (*pj->job->y)[r] = postscale(acc, sc.post_shift, sc.post_alternate, r);
            }
        }
    }

    for (auto* pj : jobs) {
        const auto& sc = pj->scaling;
        if (sc.column_output)
            for (std::size_t c = 0; c < n; ++c)
                (*pj->job->y)[c] = postscale((*pj->acc)[c], sc.post_shift, sc.post_alternate, c);
        pj->pre.reset();
        pj->acc.reset();
    }
}

}  // namespace

void oracle_apply_batch(Family family, std::size_t n, std::span<OracleJob> jobs,
                        const PrecisionConfig& cfg) {
    if (n == 0 || n > kOracleSizeCap)
        throw std::invalid_argument("oracle_apply_batch: n outside [1, 2^17]");
    const mpfr_prec_t prec = working_precision(cfg, n);
    std::vector<PreparedJob> prepared(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].x.size() != n || jobs[i].y == nullptr)
            throw std::invalid_argument("oracle_apply_batch: bad job");
        jobs[i].y->assign(n, 0.0);
        prepared[i].scaling = scaling_for(family, jobs[i].variant);
        prepared[i].job = &jobs[i];
    }

    // Split jobs across a pair of workers; each worker regenerates the
    // entry stream privately (one add per entry, cheap next to the fmas).
    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 2);
    if (jobs.size() < 2 || n < 1024) workers = 1;
    std::vector<std::vector<PreparedJob*>> shares(workers);
    for (std::size_t i = 0; i < prepared.size(); ++i)
        shares[i % workers].push_back(&prepared[i]);

    if (workers == 1) {
        run_jobs(n, prec, std::span<PreparedJob*>(shares[0]));
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
            run_jobs(n, prec, std::span<PreparedJob*>(shares[w]));
            mpfr_free_cache();
        });
    for (auto& t : threads) t.join();
}

std::vector<double> oracle_apply(const MatrixSpec& spec, std::span<const double> x,
                                 const PrecisionConfig& cfg) {
    if (x.size() != spec.n) throw std::invalid_argument("oracle_apply: dimension mismatch");
    std::vector<double> y;
    OracleJob job{spec.variant, x, &y};
    oracle_apply_batch(spec.family, spec.n, std::span<OracleJob>(&job, 1), cfg);
    return y;
}

double uniform_relative_error(std::span<const double> y_true, std::span<const double> y_hat) {
    if (y_true.size() != y_hat.size())
        throw std::invalid_argument("uniform_relative_error: length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        num = std::max(num, std::abs(y_true[i] - y_hat[i]));
        den = std::max(den, std::abs(y_true[i]));
    }
    if (den == 0.0) throw std::invalid_argument("uniform_relative_error: y_true is all zero");
    return num / den;
}

std::vector<double> oracle_bezier_point(std::span<const double> points, std::size_t count,
                                        std::size_t dim, double t, const PrecisionConfig& cfg) {
    if (count == 0 || dim == 0 || points.size() != count * dim)
        throw std::invalid_argument("oracle_bezier_point: bad shape");
    const std::size_t n = count - 1;
    const mpfr_prec_t prec = working_precision(cfg, count);
    MpArray acc(dim, prec);
    MpArray tmp(4, prec);
    mpfr_ptr binom = tmp[0], tpow = tmp[1], weight = tmp[2], term = tmp[3];
    for (std::size_t d = 0; d < dim; ++d) mpfr_set_zero(acc[d], 0);

    // weight_i = C(n,i) t^i (1-t)^(n-i), accumulated highest power last
    mpfr_set_ui(binom, 1, MPFR_RNDN);
    for (std::size_t i = 0; i <= n; ++i) {
        mpfr_set_d(tpow, 1.0 - t, MPFR_RNDN);
        mpfr_pow_ui(weight, tpow, static_cast<unsigned long>(n - i), MPFR_RNDN);
        mpfr_set_d(tpow, t, MPFR_RNDN);
        mpfr_pow_ui(tpow, tpow, static_cast<unsigned long>(i), MPFR_RNDN);
        mpfr_mul(weight, weight, tpow, MPFR_RNDN);
        mpfr_mul(weight, weight, binom, MPFR_RNDN);
        for (std::size_t d = 0; d < dim; ++d) {
            mpfr_set_d(term, points[i * dim + d], MPFR_RNDN);
            mpfr_fma(acc[d], weight, term, acc[d], MPFR_RNDN);
        }
        if (i < n) {
            mpfr_mul_ui(binom, binom, static_cast<unsigned long>(n - i), MPFR_RNDN);
            mpfr_div_ui(binom, binom, static_cast<unsigned long>(i + 1), MPFR_RNDN);
        }
    }
    std::vector<double> out(dim);
    for (std::size_t d = 0; d < dim; ++d) out[d] = mpfr_get_d(acc[d], MPFR_RNDN);
    return out;
}

}  // namespace pascalx
