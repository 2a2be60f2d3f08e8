#include "symfun/bounds.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

using namespace symfun;

TEST_CASE("threshold complexity on the boolean AND parameters") {
    const auto rep = threshold_complexity(2, 1, 1);
    CHECK(rep.fooling_size == 3);  // min(5, 4, 3)
    CHECK(rep.lower_bits_per_instance == doctest::Approx(std::log2(3.0)));
    CHECK(rep.upper_bits_per_instance == doctest::Approx(std::log2(3.0)));
    CHECK(rep.case_tag == CaseTag::b);
}

TEST_CASE("threshold complexity corner cases") {
    const auto constant = threshold_complexity(0, 5, 7);
    CHECK(constant.lower_bits_per_instance == 0.0);
    CHECK(constant.upper_bits_per_instance == 0.0);
    CHECK(constant.case_tag == CaseTag::constant);
    CHECK(constant.fooling_size == 1);

    const auto middle = threshold_complexity(4, 2, 9);
    CHECK(middle.case_tag == CaseTag::c);
    CHECK(middle.fooling_size == 6);  // 2*m1 + 2, cross-checked below
    CHECK(fooling_set_size(4, 2, 9) == 6);
    CHECK(middle.lower_bits_per_instance == doctest::Approx(std::log2(6.0)));

    CHECK(threshold_complexity(7, 3, 3).case_tag == CaseTag::constant);
    CHECK(threshold_complexity(2, 4, 4).case_tag == CaseTag::a);
}

TEST_CASE("fooling set sizes by direct enumeration") {
    CHECK(fooling_set_size(2, 2, 2) == 5);  // 2*theta + 1
    CHECK(fooling_set_size(3, 2, 3) == 6);  // sums 2 and 3: 3 + 3 pairs
    CHECK(fooling_set_size(5, 3, 3) == 5);  // 2*(n - theta + 1) + 1
    CHECK(fooling_set_size(0, 4, 4) == 1);  // only (0, 0)
    CHECK(fooling_set_size(9, 3, 3) == 0);  // even theta - 1 is unreachable
}

TEST_CASE("coefficient oracle examples") {
    const std::vector<int> two_ones{1, 1};
    const std::vector<long long> p12{1, 2};
    CHECK(coefficient_sum(two_ones, p12) == 3);  // (1+Y)^2 = 1 + 2Y + Y^2

    const std::vector<int> single{7};
    const std::vector<long long> p0{0};
    CHECK(coefficient_sum(single, p0) == 1);

    const std::vector<int> pair23{2, 3};
    const std::vector<long long> p23{2, 3};
    CHECK(coefficient_sum(pair23, p23) == 6);
    CHECK(coefficient_sum(pair23, p23) == fooling_set_size(3, 2, 3));

    const std::vector<long long> negative{-1, 0};
    CHECK(coefficient_sum(two_ones, negative) == 1);  // negative powers contribute 0
}

TEST_CASE("fooling enumeration agrees with the polynomial route and the case formulas") {
    for (int theta = 0; theta <= 12; ++theta)
        for (int m1 = 0; m1 <= 12; ++m1)
            for (int m2 = 0; m2 <= 12; ++m2) {
                CAPTURE(theta);
                CAPTURE(m1);
                CAPTURE(m2);
                const auto z = fooling_set_size(theta, m1, m2);
                const std::vector<int> maxima{m1, m2};
                const std::vector<long long> powers{theta - 1, theta};
                REQUIRE(z == coefficient_sum(maxima, powers));

                if (theta >= 1 && theta <= m1 + m2) {
                    const int mn = std::min(m1, m2);
                    const int mx = std::max(m1, m2);
                    std::uint64_t formula;
                    if (theta <= mn)
                        formula = 2ull * theta + 1;
                    else if (theta > mx)
                        formula = 2ull * (m1 + m2 - theta + 1) + 1;
                    else
                        formula = 2ull * mn + 2;
                    REQUIRE(z == formula);
                    REQUIRE(threshold_complexity(theta, m1, m2).fooling_size == formula);
                }
            }
}

TEST_CASE("threshold complexity is symmetric in the node maxima") {
    for (int theta = 0; theta <= 9; ++theta)
        for (int m1 = 0; m1 <= 8; ++m1)
            for (int m2 = 0; m2 <= 8; ++m2) {
                const auto r12 = threshold_complexity(theta, m1, m2);
                const auto r21 = threshold_complexity(theta, m2, m1);
                CHECK(r12.fooling_size == r21.fooling_size);
                CHECK(r12.lower_bits_per_instance == r21.lower_bits_per_instance);
            }
}

TEST_CASE("complexity rises below m1 and falls above m2") {
    for (int m1 = 1; m1 <= 8; ++m1)
        for (int m2 = m1; m2 <= 8; ++m2) {
            for (int theta = 2; theta <= m1; ++theta)
                CHECK(threshold_complexity(theta, m1, m2).fooling_size >=
                      threshold_complexity(theta - 1, m1, m2).fooling_size);
            for (int theta = m2 + 2; theta <= m1 + m2; ++theta)
                CHECK(threshold_complexity(theta, m1, m2).fooling_size <=
                      threshold_complexity(theta - 1, m1, m2).fooling_size);
        }
}

TEST_CASE("interval bounds") {
    const auto rep = interval_bounds(2, 3, 4, 5);
    CHECK(rep.lower_bits_per_instance == doctest::Approx(std::log2(5.0)));
    CHECK(rep.upper_bits_per_instance == doctest::Approx(std::log2(9.0)));
    CHECK(rep.regime_valid);  // b = 3 <= 4.5
    CHECK(rep.case_tag == CaseTag::interval);

    const auto full = interval_bounds(0, 7, 3, 4);  // constant 1
    CHECK(full.lower_bits_per_instance == 0.0);
    CHECK(full.upper_bits_per_instance == 0.0);
    CHECK(full.case_tag == CaseTag::constant);

    const auto point = interval_bounds(2, 2, 3, 3);
    CHECK(point.lower_bits_per_instance == doctest::Approx(2.0));  // min(5, 4)
    CHECK(point.upper_bits_per_instance == doctest::Approx(std::log2(7.0)));
    CHECK(point.regime_valid);
}

TEST_CASE("exact floor and ceil of B*log2") {
    CHECK(ceil_log2_pow_wide(3, 8) == 13);
    CHECK(floor_log2_pow(3, 8) == 12);
    CHECK(ceil_log2_pow_wide(4, 4) == 8);
    CHECK(floor_log2_pow(4, 4) == 8);
    CHECK(ceil_log2_pow_wide(1, 5) == 0);
    CHECK(ceil_log2_pow_wide(6, 2) == 6);   // ceil(2 log2 6) = 6
    CHECK(ceil_log2_pow_wide(7, 2) == 6);   // ceil(2 log2 7) = 6
    CHECK(ceil_log2_pow_wide(9, 26) == 83); // through the 128-bit path
}
