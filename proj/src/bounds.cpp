#include "symfun/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace symfun {

std::string to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::a: return "a";
        case CaseTag::b: return "b";
        case CaseTag::c: return "c";
        case CaseTag::constant: return "constant";
        case CaseTag::interval: return "interval";
    }
    return "?";
}

BoundReport threshold_complexity(int theta, int m1, int m2) {
    if (theta < 0 || m1 < 0 || m2 < 0)
        throw std::invalid_argument("threshold_complexity: arguments must be nonnegative");
    const int mn = std::min(m1, m2);
    const int mx = std::max(m1, m2);
    const int n = m1 + m2;

    BoundReport rep;
    if (theta == 0 || theta > n) {
        rep.case_tag = CaseTag::constant;
        rep.fooling_size = std::max<std::uint64_t>(fooling_set_size(theta, m1, m2), 1);
        return rep;
    }
    const long long z = std::min<long long>({2LL * theta + 1, 2LL * mn + 2, 2LL * (n - theta + 1) + 1});
    rep.fooling_size = static_cast<std::uint64_t>(z);
    rep.lower_bits_per_instance = std::log2(static_cast<double>(z));
    rep.upper_bits_per_instance = rep.lower_bits_per_instance;
    rep.case_tag = theta <= mn ? CaseTag::a : (theta > mx ? CaseTag::b : CaseTag::c);
    return rep;
}

std::uint64_t fooling_set_size(int theta, int m1, int m2) {
    if (theta < 0 || m1 < 0 || m2 < 0)
        throw std::invalid_argument("fooling_set_size: arguments must be nonnegative");
    std::uint64_t count = 0;
    for (int z1 = 0; z1 <= m1; ++z1)
        for (int z2 = 0; z2 <= m2; ++z2) {
            const int s = z1 + z2;
            if (s >= theta - 1 && s <= theta) ++count;
        }
    return count;
}

std::uint64_t coefficient_sum(std::span<const int> max_values, std::span<const long long> powers) {
    std::vector<std::uint64_t> poly{1};
    for (int m : max_values) {
        if (m < 0) throw std::invalid_argument("coefficient_sum: maxima must be nonnegative");
        std::vector<std::uint64_t> next(poly.size() + static_cast<std::size_t>(m), 0);
        for (std::size_t i = 0; i < poly.size(); ++i)
            for (int d = 0; d <= m; ++d) next[i + static_cast<std::size_t>(d)] += poly[i];
        poly = std::move(next);
    }
    std::uint64_t total = 0;
    for (long long e : powers)
        if (e >= 0 && static_cast<std::size_t>(e) < poly.size()) total += poly[static_cast<std::size_t>(e)];
    return total;
}

BoundReport interval_bounds(int a, int b, int m1, int m2) {
    if (a < 0 || b < a || m1 < 0 || m2 < 0)
        throw std::invalid_argument("interval_bounds: need 0 <= a <= b and nonnegative maxima");
    const int mn = std::min(m1, m2);
    const int n = m1 + m2;

    BoundReport rep;
    rep.case_tag = CaseTag::interval;
    rep.regime_valid = 2 * b <= n;
    if (a > n || (a == 0 && b >= n)) {  // constant 0 / constant 1
        rep.case_tag = CaseTag::constant;
        return rep;
    }
    const long long lower = std::min<long long>(2LL * b - a + 3, mn + 1);
    const long long upper = std::min<long long>(2LL * (b + 1) + 1, 2LL * mn + 2);
    rep.lower_bits_per_instance = std::log2(static_cast<double>(lower));
    rep.upper_bits_per_instance = std::log2(static_cast<double>(upper));
    return rep;
}

namespace {

// base^exp as unsigned 128-bit; false when it overflows.
bool pow_u128(std::uint64_t base, int exp, unsigned __int128& out) {
    unsigned __int128 acc = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && acc > (~static_cast<unsigned __int128>(0)) / base) return false;
        acc *= base;
    }
    out = acc;
    return true;
}

int bit_width_u128(unsigned __int128 v) {
    int w = 0;
    while (v) {
        ++w;
        v >>= 1;
    }
    return w;
}

}  // namespace

int floor_log2_pow(std::uint64_t base, int exp) {
    if (base == 0) throw std::invalid_argument("floor_log2_pow: base 0");
    unsigned __int128 pow = 0;
    if (pow_u128(base, exp, pow)) return bit_width_u128(pow) - 1;
    const double x = static_cast<double>(exp) * std::log2(static_cast<double>(base));
    return static_cast<int>(std::floor(x + 1e-9));
}

int ceil_log2_pow_wide(std::uint64_t base, int exp) {
    if (base == 0) throw std::invalid_argument("ceil_log2_pow_wide: base 0");
    unsigned __int128 pow = 0;
    if (pow_u128(base, exp, pow)) return pow <= 1 ? 0 : bit_width_u128(pow - 1);
    const double x = static_cast<double>(exp) * std::log2(static_cast<double>(base));
    return static_cast<int>(std::ceil(x - 1e-9));
}

}  // namespace symfun
