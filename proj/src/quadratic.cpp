#include "pascalx/quadratic.hpp"

#include <cmath>

#include "pascalx/binomial.hpp"
#include "pascalx/flops.hpp"

namespace pascalx {
namespace {

// The eight sweep chains below apply the ordered products of bidiagonal
// factors. Factor E_k^(delta) (resp. F_k^(delta)) acts on indices
// [k-1, n-1]: its first block row is the identity row, the remaining rows
// carry (delta, delta) (resp. (1, delta)) on the sub/main diagonal. Chains
// are written rightmost-factor-first; loop bounds and traversal directions
// are chosen so each factor application is safely in place.

// E_{n-1} ... E_1 (delta = 1 collapses to pure adds).
void chain_e_mul(std::span<double> x, double delta) {
    const std::size_t n = x.size();
    if (n < 2) return;
    if (delta == 1.0) {
        for (std::size_t k = 1; k < n; ++k)
            for (std::size_t j = n - 1; j >= k; --j) x[j] += x[j - 1];
        count_flops(n * (n - 1) / 2, 0);
    } else {
        for (std::size_t k = 1; k < n; ++k)
            for (std::size_t j = n - 1; j >= k; --j) x[j] = delta * (x[j - 1] + x[j]);
        count_flops(n * (n - 1) / 2, n * (n - 1) / 2);
    }
}

// E_1^T ... E_{n-1}^T. Scaling x_{j+1} before the add pre-applies the
// diagonal delta of later rows, keeping the sweep at one add and one
// multiply per element.
void chain_et_mul(std::span<double> x, double delta) {
    const std::size_t n = x.size();
    if (n < 2) return;
    if (delta == 1.0) {
        for (std::size_t k = n - 1; k >= 1; --k)
            for (std::size_t j = k - 1; j + 1 < n; ++j) x[j] += x[j + 1];
        count_flops(n * (n - 1) / 2, 0);
    } else {
        for (std::size_t k = n - 1; k >= 1; --k) {
            for (std::size_t j = k - 1; j + 1 < n; ++j) {
                x[j + 1] *= delta;
                x[j] += x[j + 1];
            }
        }
        count_flops(n * (n - 1) / 2, n * (n - 1) / 2);
    }
}

// F_{n-1} ... F_1.
void chain_f_mul(std::span<double> x, double delta) {
    const std::size_t n = x.size();
    if (n < 2) return;
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t j = n - 1; j >= k; --j) x[j] = x[j - 1] + delta * x[j];
    count_flops(n * (n - 1) / 2, n * (n - 1) / 2);
}

// F_1^T ... F_{n-1}^T, with the interleaved add-then-scale update.
void chain_ft_mul(std::span<double> x, double delta) {
    const std::size_t n = x.size();
    if (n < 2) return;
    for (std::size_t k = n - 1; k >= 1; --k) {
        for (std::size_t j = k - 1; j + 1 < n; ++j) {
            x[j] += x[j + 1];
            x[j + 1] *= delta;
        }
    }
    count_flops(n * (n - 1) / 2, n * (n - 1) / 2);
}

// F_1^{-1} ... F_{n-1}^{-1} (forward substitution per factor).
void chain_f_solve(std::span<double> x, double delta) {
    const std::size_t n = x.size();
    if (n < 2) return;
    const double inv = 1.0 / delta;
    for (std::size_t k = n - 1; k >= 1; --k)
        for (std::size_t j = k; j < n; ++j) x[j] = (x[j] - x[j - 1]) * inv;
    count_flops(n * (n - 1) / 2, n * (n - 1) / 2);
}

// E_1^{-1} ... E_{n-1}^{-1}.
void chain_e_solve(std::span<double> x, double delta) {
    const std::size_t n = x.size();
    if (n < 2) return;
    if (delta == 1.0) {
        for (std::size_t k = n - 1; k >= 1; --k)
            for (std::size_t j = k; j < n; ++j) x[j] -= x[j - 1];
        count_flops(n * (n - 1) / 2, 0);
    } else {
        const double inv = 1.0 / delta;
        for (std::size_t k = n - 1; k >= 1; --k)
            for (std::size_t j = k; j < n; ++j) x[j] = x[j] * inv - x[j - 1];
        count_flops(n * (n - 1) / 2, n * (n - 1) / 2);
    }
}

// E_{n-1}^{-T} ... E_1^{-T}: chain_et_mul run backwards with each
// statement inverted.
void chain_et_solve(std::span<double> x, double delta) {
    const std::size_t n = x.size();
    if (n < 2) return;
    if (delta == 1.0) {
        for (std::size_t k = 1; k < n; ++k)
            for (std::size_t j = n - 1; j >= k; --j) x[j - 1] -= x[j];
        count_flops(n * (n - 1) / 2, 0);
    } else {
        const double inv = 1.0 / delta;
        for (std::size_t k = 1; k < n; ++k) {
            for (std::size_t j = n - 1; j >= k; --j) {
                x[j - 1] -= x[j];
                x[j] *= inv;
            }
        }
        count_flops(n * (n - 1) / 2, n * (n - 1) / 2);
    }
}

// F_{n-1}^{-T} ... F_1^{-T}: chain_ft_mul run backwards, inverted.
void chain_ft_solve(std::span<double> x, double delta) {
    const std::size_t n = x.size();
    if (n < 2) return;
    const double inv = 1.0 / delta;
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t j = n - 1; j >= k; --j) {
            x[j] *= inv;
            x[j - 1] -= x[j];
        }
    }
    count_flops(n * (n - 1) / 2, n * (n - 1) / 2);
}

void apply_q(Variant variant, Strategy strategy, std::span<double> x) {
    const bool direct = strategy == Strategy::DirectMultiply;
    switch (variant) {
        case Variant::Identity:
            if (direct) {
                chain_e_mul(x, 0.5);  // Q = E_{n-1} ... E_1
            } else {
                apply_sign(x);  // Q = W F_1^{-1} ... F_{n-1}^{-1} W
                chain_f_solve(x, 2.0);
                apply_sign(x);
            }
            return;
        case Variant::Transpose:
            if (direct) {
                chain_et_mul(x, 0.5);  // Q^T = E_1^T ... E_{n-1}^T
            } else {
                apply_sign(x);  // Q^T = W F_{n-1}^{-T} ... F_1^{-T} W
                chain_ft_solve(x, 2.0);
                apply_sign(x);
            }
            return;
        case Variant::Inverse:
            if (direct) {
                apply_sign(x);  // Q^{-1} = W F_{n-1} ... F_1 W
                chain_f_mul(x, 2.0);
                apply_sign(x);
            } else {
                chain_e_solve(x, 0.5);  // Q^{-1} = E_1^{-1} ... E_{n-1}^{-1}
            }
            return;
        case Variant::InverseTranspose:
            if (direct) {
                apply_sign(x);  // Q^{-T} = W F_1^T ... F_{n-1}^T W
                chain_ft_mul(x, 2.0);
                apply_sign(x);
            } else {
                chain_et_solve(x, 0.5);  // Q^{-T} = E_{n-1}^{-T} ... E_1^{-T}
            }
            return;
    }
}

void apply_p(Variant variant, Strategy strategy, std::span<double> x) {
    const bool direct = strategy == Strategy::DirectMultiply;
    switch (variant) {
        case Variant::Identity:
            if (direct) {
                chain_e_mul(x, 1.0);
            } else {
                apply_sign(x);  // P = W E_1^{-1} ... E_{n-1}^{-1} W
                chain_e_solve(x, 1.0);
                apply_sign(x);
            }
            return;
        case Variant::Transpose:
            if (direct) {
                chain_et_mul(x, 1.0);
            } else {
                apply_sign(x);  // P^T = W E_{n-1}^{-T} ... E_1^{-T} W
                chain_et_solve(x, 1.0);
                apply_sign(x);
            }
            return;
        case Variant::Inverse:
            if (direct) {
                apply_sign(x);  // P^{-1} = W P W
                chain_e_mul(x, 1.0);
                apply_sign(x);
            } else {
                chain_e_solve(x, 1.0);  // P^{-1} = E_1^{-1} ... E_{n-1}^{-1}
            }
            return;
        case Variant::InverseTranspose:
            if (direct) {
                apply_sign(x);  // P^{-T} = W P^T W
                chain_et_mul(x, 1.0);
                apply_sign(x);
            } else {
                chain_et_solve(x, 1.0);
            }
            return;
    }
}

}  // namespace

void apply_quadratic(const MatrixSpec& spec, Strategy strategy, std::span<double> x) {
    if (x.size() != spec.n)
        throw std::invalid_argument("apply_quadratic: vector length " + std::to_string(x.size()) +
                                    " does not match spec dimension " + std::to_string(spec.n));
    if (spec.n < 2) return;  // every 1x1 member of the family is the identity
    if (spec.family == Family::Q)
        apply_q(spec.variant, strategy, x);
    else
        apply_p(spec.variant, strategy, x);
}

double pascal_entry(const MatrixSpec& spec, std::size_t i, std::size_t j) {
    if (i >= spec.n || j >= spec.n)
        throw std::out_of_range("pascal_entry: index outside [0, n)");
    // Resolve the variant to +/- 2^e * C(r, c) with (r, c) in the lower triangle.
    std::size_t r = i, c = j;
    if (spec.variant == Variant::Transpose || spec.variant == Variant::InverseTranspose) {
        r = j;
        c = i;
    }
    if (c > r) return 0.0;
    const bool inverse =
        spec.variant == Variant::Inverse || spec.variant == Variant::InverseTranspose;
    double sign = (inverse && ((i + j) & 1)) ? -1.0 : 1.0;
    int e = 0;
    if (spec.family == Family::Q) {
        // Q = D^(1/2) P, Q^{-1} = W P D^(2) W and their transposes.
        e = inverse ? static_cast<int>(c) : -static_cast<int>(r);
    }
    return sign * binomial_scaled_d(r, c, e);
}

std::vector<double> DenseMatrix::apply(std::span<const double> x) const {
    if (x.size() != cols) throw std::invalid_argument("DenseMatrix::apply: dimension mismatch");
    std::vector<double> y(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        long double acc = 0.0L;
        const double* row = data.data() + i * cols;
        for (std::size_t j = 0; j < cols; ++j) acc += static_cast<long double>(row[j]) * x[j];
        y[i] = static_cast<double>(acc);
    }
    return y;
}

DenseMatrix dense_materialize(const MatrixSpec& spec, std::size_t cap) {
    if (spec.n > cap)
        throw std::invalid_argument("dense_materialize: n exceeds cap " + std::to_string(cap));
    DenseMatrix m;
    m.rows = m.cols = spec.n;
    m.data.assign(spec.n * spec.n, 0.0);
    for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t j = 0; j < spec.n; ++j) m.at(i, j) = pascal_entry(spec, i, j);
    return m;
}

}  // namespace pascalx
