#pragma once

// In-place O(n^2) kernels for all 16 Pascal-family matrices. Every kernel
// is a sweep over the bidiagonal factors E_k^(delta) / F_k^(delta) (or
// their inverses, for the solve strategy), with the sign involution W
// applied as plain negations where the factorization calls for it.
//
// Q family uses E = E^(1/2), F = F^(2); P family degenerates to delta = 1,
// where the identity/transpose sweeps are pure additions.

#include <cstddef>
#include <span>
#include <vector>

#include "pascalx/matrix_spec.hpp"

namespace pascalx {

/// x <- M x where M is the matrix denoted by spec. O(1) extra space,
/// n(n-1)/2 adds and at most n(n-1)/2 multiplies.
/// Throws std::invalid_argument on dimension mismatch.
void apply_quadratic(const MatrixSpec& spec, Strategy strategy, std::span<double> x);

/// Single entry of the denoted matrix. Exact integer binomials where they
/// are representable, exponent-tracked products beyond.
/// Throws std::out_of_range for indices outside [0, n).
double pascal_entry(const MatrixSpec& spec, std::size_t i, std::size_t j);

/// Minimal row-major dense matrix, used by tests and the dense oracle path.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    /// y = M x with long double accumulation.
    std::vector<double> apply(std::span<const double> x) const;
};

inline constexpr std::size_t kDenseMaterializeCap = 2048;

/// Full dense matrix via pascal_entry. Throws std::invalid_argument if
/// spec.n exceeds the cap.
DenseMatrix dense_materialize(const MatrixSpec& spec, std::size_t cap = kDenseMaterializeCap);

}  // namespace pascalx
