#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace testutil {

inline std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<double> x(n);
    for (auto& v : x) v = gauss(rng);
    return x;
}

/// ||a - b||_inf / ||a||_inf
inline double rel_err(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(a[i]));
    }
    return den > 0.0 ? num / den : num;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += static_cast<long double>(a[i]) * static_cast<long double>(b[i]);
    return static_cast<double>(acc);
}

}  // namespace testutil
