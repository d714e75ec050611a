#pragma once

#include <cstdint>

namespace dlforge {

// binom(n, k) mod 2. Negative or out-of-range arguments give 0.
// By Lucas' theorem the coefficient is odd iff every bit of k is set in n.
constexpr int binomial_mod2(std::int64_t n, std::int64_t k)
{
    if (n < 0 || k < 0 || k > n)
        return 0;
    return (k & ~n) == 0 ? 1 : 0;
}

// Generalised binom(m, k) = m(m-1)...(m-k+1)/k! mod 2 for any integer m and
// k >= 0. For m < 0 uses binom(m, k) = (-1)^k binom(k - m - 1, k).
constexpr int binomial_mod2_signed(std::int64_t m, std::int64_t k)
{
    if (k < 0)
        return 0;
    if (m >= 0)
        return binomial_mod2(m, k);
    return binomial_mod2(k - m - 1, k);
}

}  // namespace dlforge
