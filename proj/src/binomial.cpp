#include "pascalx/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pascalx {

std::optional<unsigned __int128> binomial_exact_u128(std::uint64_t r, std::uint64_t c) {
    if (c > r) return static_cast<unsigned __int128>(0);
    c = std::min(c, r - c);
    unsigned __int128 v = 1;
    for (std::uint64_t t = 1; t <= c; ++t) {
        unsigned __int128 scaled;
        // v * (r - c + t) is always divisible by t (the running value stays
        // the integer C(r - c + t, t)), so the division below is exact.
        if (__builtin_mul_overflow(v, static_cast<unsigned __int128>(r - c + t), &scaled))
            return std::nullopt;
        v = scaled / t;
    }
    return v;
}

long double binomial_ld(std::uint64_t r, std::uint64_t c) {
    if (c > r) return 0.0L;
    c = std::min(c, r - c);
    long double v = 1.0L;
    for (std::uint64_t t = 1; t <= c; ++t)
        v = v * static_cast<long double>(r - c + t) / static_cast<long double>(t);
    return v;
}

double binomial_d(std::uint64_t r, std::uint64_t c) {
    if (auto exact = binomial_exact_u128(r, c)) return static_cast<double>(*exact);
    return static_cast<double>(binomial_ld(r, c));
}

double binomial_scaled_d(std::uint64_t r, std::uint64_t c, int e) {
    if (auto exact = binomial_exact_u128(r, c))
        return std::ldexp(static_cast<double>(*exact), e);
    return static_cast<double>(ldexpl(binomial_ld(r, c), e));
}

}  // namespace pascalx
