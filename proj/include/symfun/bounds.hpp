#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace symfun {

// Which regime of the threshold complexity formula applies:
//   a: theta <= min(m1, m2)        -> 2*theta + 1
//   b: theta >  max(m1, m2)        -> 2*(m1 + m2 - theta + 1) + 1
//   c: min < theta <= max          -> 2*min(m1, m2) + 2
// `constant` covers theta = 0 and theta > m1 + m2; `interval` labels
// sum-interval reports, which have no threshold case.
enum class CaseTag { a, b, c, constant, interval };

std::string to_string(CaseTag tag);

struct BoundReport {
    double lower_bits_per_instance = 0.0;
    double upper_bits_per_instance = 0.0;
    std::uint64_t fooling_size = 1;  // >= 1; meaningful for thresholds
    CaseTag case_tag = CaseTag::constant;
    // Sum-interval lower bounds are only claimed for b <= (m1 + m2) / 2.
    bool regime_valid = true;
};

// Exact worst-case per-instance complexity of a two-party sum-threshold
// function: lower = upper = log2 min(2*theta+1, 2*min(m1,m2)+2,
// 2*(m1+m2-theta+1)+1), clamped to 0 for constant functions.
BoundReport threshold_complexity(int theta, int m1, int m2);

// Counts pairs (z1, z2) with 0 <= z1 <= m1, 0 <= z2 <= m2 and
// theta - 1 <= z1 + z2 <= theta, by direct enumeration. This is the raw
// fooling-set size; it naturally gives 1 at theta = 0 and 0 for
// theta > m1 + m2 + 1.
std::uint64_t fooling_set_size(int theta, int m1, int m2);

// Sum over e in `powers` of the coefficient of Y^e in the product of
// (1 + Y + ... + Y^max_values[i]) over all nodes, by exact integer
// polynomial multiplication. Out-of-range exponents contribute 0, so for
// two nodes and powers {theta-1, theta} this equals fooling_set_size for
// every theta >= 0.
std::uint64_t coefficient_sum(std::span<const int> max_values, std::span<const long long> powers);

// Sum-interval bounds: lower = log2 min(2b-a+3, min(m1,m2)+1),
// upper = log2 min(2(b+1)+1, 2*min(m1,m2)+2); constant functions clamp to
// (0, 0). regime_valid is set iff b <= (m1 + m2) / 2.
BoundReport interval_bounds(int a, int b, int m1, int m2);

// Exact floor/ceil of exp * log2(base) computed through integer powers.
int floor_log2_pow(std::uint64_t base, int exp);
int ceil_log2_pow_wide(std::uint64_t base, int exp);

}  // namespace symfun
