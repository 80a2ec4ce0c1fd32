#pragma once

// Binomial coefficient helpers shared by the entry generator and the
// convolution kernel builders. Small coefficients are computed with exact
// 128-bit integer arithmetic; larger ones fall back to a long double
// running product (long double has enough exponent range for C(m, m/2)
// up to m ~ 16000, far past anything this library evaluates densely).

#include <cstdint>
#include <optional>

namespace pascalx {

/// Exact C(r, c) while it fits in unsigned __int128; nullopt on overflow.
std::optional<unsigned __int128> binomial_exact_u128(std::uint64_t r, std::uint64_t c);

/// C(r, c) in long double via the multiplicative recurrence. Exact for
/// values below 2^64; correctly accumulated to ~c ulp beyond that.
long double binomial_ld(std::uint64_t r, std::uint64_t c);

/// C(r, c) rounded to double (inf if it exceeds the double range).
double binomial_d(std::uint64_t r, std::uint64_t c);

/// C(r, c) * 2^e rounded to double; the scaling is applied inside the
/// long double computation so Q-family entries never overflow en route.
double binomial_scaled_d(std::uint64_t r, std::uint64_t c, int e);

}  // namespace pascalx
