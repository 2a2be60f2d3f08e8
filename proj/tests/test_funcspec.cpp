#include "symfun/funcspec.hpp"

#include <vector>

#include "doctest.h"

using namespace symfun;

namespace {

// Independent separation oracle: compare every pair of letters by brute
// force and group them greedily. No row hashing, no shortcuts.
std::vector<std::vector<int>> oracle_classes(const FunctionSpec& spec, int m_own, int m_other) {
    auto rows_equal = [&](int x1, int x2) {
        for (int y = 0; y <= m_other; ++y)
            if (spec.eval(x1 + y) != spec.eval(x2 + y)) return false;
        return true;
    };
    std::vector<std::vector<int>> groups;
    for (int x = 0; x <= m_own; ++x) {
        bool placed = false;
        for (auto& g : groups)
            if (rows_equal(g.front(), x)) {
                g.push_back(x);
                placed = true;
                break;
            }
        if (!placed) groups.push_back({x});
    }
    return groups;
}

const FunctionSpec parity_to_6 = FunctionSpec::general({0, 1, 0, 1, 0, 1, 0});

}  // namespace

TEST_CASE("eval on the three families") {
    CHECK(FunctionSpec::threshold(2).eval(3) == 1);
    CHECK(FunctionSpec::interval(2, 3).eval(4) == 0);
    CHECK(FunctionSpec::threshold(0).eval(0) == 1);

    CHECK(FunctionSpec::interval(2, 3).eval(2) == 1);
    CHECK(parity_to_6.eval(5) == 1);
    CHECK_THROWS_AS(parity_to_6.eval(7), std::domain_error);
    CHECK_THROWS_AS(FunctionSpec::threshold(1).eval(-1), std::domain_error);
    CHECK_THROWS_AS(FunctionSpec::interval(3, 2), std::invalid_argument);
}

TEST_CASE("binary output detection") {
    CHECK(FunctionSpec::threshold(4).binary_output());
    CHECK(parity_to_6.binary_output());
    CHECK_FALSE(FunctionSpec::general({0, 1, 2}).binary_output());
}

TEST_CASE("separation of a threshold: high letters merge into a constant-1 class") {
    const auto part = separate(FunctionSpec::threshold(2), 4, 4);
    REQUIRE(part.size() == 3);
    CHECK(part.classes[0] == std::vector<int>{0});
    CHECK(part.classes[1] == std::vector<int>{1});
    CHECK(part.classes[2] == std::vector<int>{2, 3, 4});
    REQUIRE(part.a1_class.has_value());
    CHECK(*part.a1_class == 2);
    CHECK_FALSE(part.a0_class.has_value());
    CHECK(part.ambiguous_count() == 2);
}

TEST_CASE("separation of an unreachable threshold collapses to one constant-0 class") {
    const auto part = separate(FunctionSpec::threshold(5), 2, 2);
    REQUIRE(part.size() == 1);
    CHECK(part.classes[0] == std::vector<int>{0, 1, 2});
    REQUIRE(part.a0_class.has_value());
    CHECK_FALSE(part.a1_class.has_value());
    CHECK(part.ambiguous_count() == 0);
}

TEST_CASE("separation of parity groups letters mod 2") {
    const auto part = separate(parity_to_6, 3, 3);
    REQUIRE(part.size() == 2);
    CHECK(part.classes[0] == std::vector<int>{0, 2});
    CHECK(part.classes[1] == std::vector<int>{1, 3});
    CHECK_FALSE(part.a0_class.has_value());
    CHECK_FALSE(part.a1_class.has_value());
    CHECK(part.ambiguous_count() == 2);
}

TEST_CASE("separation matches the pairwise oracle over a sweep") {
    std::vector<FunctionSpec> specs;
    for (int theta = 0; theta <= 10; ++theta) specs.push_back(FunctionSpec::threshold(theta));
    for (int a = 0; a <= 4; ++a)
        for (int b = a; b <= 6; ++b) specs.push_back(FunctionSpec::interval(a, b));
    specs.push_back(FunctionSpec::general({0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0}));
    specs.push_back(FunctionSpec::general({1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0}));

    for (const auto& spec : specs)
        for (int m1 = 0; m1 <= 8; ++m1)
            for (int m2 = 0; m2 <= 8; ++m2) {
                CAPTURE(spec.describe());
                CAPTURE(m1);
                CAPTURE(m2);
                const auto part = separate(spec, m1, m2);
                const auto oracle = oracle_classes(spec, m1, m2);
                REQUIRE(part.classes == oracle);
            }
}

TEST_CASE("separation is coarsest: distinct classes have a separating letter") {
    for (int theta = 1; theta <= 8; ++theta)
        for (int m1 = 0; m1 <= 8; ++m1)
            for (int m2 = 0; m2 <= 8; ++m2) {
                const auto spec = FunctionSpec::threshold(theta);
                const auto part = separate(spec, m1, m2);
                for (int c1 = 0; c1 < part.size(); ++c1)
                    for (int c2 = c1 + 1; c2 < part.size(); ++c2) {
                        bool separated = false;
                        for (int y = 0; y <= m2 && !separated; ++y)
                            separated = spec.eval(part.representative(c1) + y) !=
                                        spec.eval(part.representative(c2) + y);
                        CHECK(separated);
                    }
            }
}

TEST_CASE("threshold effective alphabet sizes follow the case structure") {
    for (int m1 = 0; m1 <= 6; ++m1)
        for (int m2 = m1; m2 <= 6; ++m2)
            for (int theta = 1; theta <= m1 + m2; ++theta) {
                const auto part = separate(FunctionSpec::threshold(theta), m1, m2);
                CAPTURE(theta);
                CAPTURE(m1);
                CAPTURE(m2);
                if (theta <= m1)
                    CHECK(part.size() == theta + 1);
                else if (theta > m2)
                    CHECK(part.size() == m1 + m2 - theta + 2);
            }
}

TEST_CASE("function spec JSON round trip") {
    for (const auto& spec :
         {FunctionSpec::threshold(2), FunctionSpec::interval(2, 3), parity_to_6}) {
        const auto back = FunctionSpec::from_json(spec.to_json());
        CHECK(back.kind == spec.kind);
        CHECK(back.theta == spec.theta);
        CHECK(back.a == spec.a);
        CHECK(back.b == spec.b);
        CHECK(back.table == spec.table);
    }
    CHECK(FunctionSpec::from_json(nlohmann::json::parse(R"({"kind":"threshold","theta":2})")).theta == 2);
    CHECK_THROWS_AS(FunctionSpec::from_json(nlohmann::json::parse(R"({"kind":"sum"})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(FunctionSpec::from_json(nlohmann::json::parse("[1,2]")), std::invalid_argument);
}
