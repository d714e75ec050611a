#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace oracle {

// n! / (k! (n-k)!) with big integers; 0 outside 0 <= k <= n.
inline boost::multiprecision::cpp_int binomial_exact(std::int64_t n, std::int64_t k)
{
    using boost::multiprecision::cpp_int;
    if (n < 0 || k < 0 || k > n)
        return 0;
    cpp_int num = 1, den = 1;
    for (std::int64_t i = 1; i <= n; ++i)
        num *= i;
    for (std::int64_t i = 1; i <= k; ++i)
        den *= i;
    for (std::int64_t i = 1; i <= n - k; ++i)
        den *= i;
    return num / den;
}

inline int binomial_parity(std::int64_t n, std::int64_t k)
{
    return static_cast<int>(binomial_exact(n, k) % 2);
}

// Adem sum computed term by term with exact binomials: pairs (r+s-i, i) with
// odd coefficient.
inline std::vector<std::pair<int, int>> adem_pairs(int r, int s)
{
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i <= r + s; ++i) {
        if (i - s - 1 < 0 || 2 * i - r < 0)
            continue;
        if (binomial_parity(i - s - 1, 2 * i - r))
            out.push_back({r + s - i, i});
    }
    return out;
}

}  // namespace oracle
