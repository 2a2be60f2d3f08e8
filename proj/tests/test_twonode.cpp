#include "symfun/twonode.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "symfun/bounds.hpp"
#include "symfun/errors.hpp"

using namespace symfun;

namespace {

TwoNodeInstance make(int m1, int m2, FunctionSpec spec, int B, int starter = 1) {
    TwoNodeInstance inst;
    inst.m1 = m1;
    inst.m2 = m2;
    inst.spec = std::move(spec);
    inst.B = B;
    inst.starter = starter;
    return inst;
}

// Every input pair decodes correctly at both nodes, by direct evaluation.
void check_zero_error(const TwoNodeInstance& inst) {
    const TwoNodeEngine engine(inst);
    std::vector<int> x1, x2;
    for (std::uint64_t r1 = 0; r1 < engine.node1_block_count(); ++r1) {
        engine.unrank_node1(r1, x1);
        for (std::uint64_t r2 = 0; r2 < engine.node2_block_count(); ++r2) {
            engine.unrank_node2(r2, x2);
            const auto run = engine.run(x1, x2);
            for (int t = 0; t < inst.B; ++t) {
                const int truth = inst.spec.eval(x1[static_cast<std::size_t>(t)] +
                                                 x2[static_cast<std::size_t>(t)]);
                REQUIRE(run.f_node1[static_cast<std::size_t>(t)] == truth);
                REQUIRE(run.f_node2[static_cast<std::size_t>(t)] == truth);
            }
        }
    }
}

}  // namespace

TEST_CASE("boolean AND: golden transcript for x1=1, x2=0") {
    const auto inst = make(1, 1, FunctionSpec::threshold(2), 1);
    const std::vector<int> x1{1}, x2{0};
    const auto run = run_two_node(inst, x1, x2);

    REQUIRE(run.transcript.events.size() == 2);
    CHECK(run.transcript.events[0].sender == 1);
    CHECK(run.transcript.events[0].bits.to_string() == "0");  // letter 1 is the short word
    CHECK(run.transcript.events[0].phase == Phase::Forward);
    CHECK(run.transcript.events[1].sender == 2);
    CHECK(run.transcript.events[1].bits.to_string() == "0");  // f = 0
    CHECK(run.transcript.events[1].phase == Phase::Reply);
    CHECK(run.transcript.total_bits() == 2);
    CHECK(run.f_node1 == std::vector<int>{0});
    CHECK(run.f_node2 == std::vector<int>{0});
}

TEST_CASE("boolean AND: full truth table at block length 1") {
    const auto inst = make(1, 1, FunctionSpec::threshold(2), 1);
    for (int x1 = 0; x1 <= 1; ++x1)
        for (int x2 = 0; x2 <= 1; ++x2) {
            const auto run = run_two_node(inst, std::vector<int>{x1}, std::vector<int>{x2});
            CHECK(run.f_node1 == std::vector<int>{x1 & x2});
            CHECK(run.f_node2 == std::vector<int>{x1 & x2});
        }
}

TEST_CASE("constant threshold exchanges zero bits") {
    const auto inst = make(3, 2, FunctionSpec::threshold(0), 4);
    const auto run = run_two_node(inst, std::vector<int>{0, 1, 2, 3}, std::vector<int>{2, 2, 0, 1});
    CHECK(run.transcript.total_bits() == 0);
    CHECK(run.f_node1 == std::vector<int>{1, 1, 1, 1});
    CHECK(run.f_node2 == std::vector<int>{1, 1, 1, 1});
    CHECK(worst_case_bits(inst).bits == 0);
}

TEST_CASE("threshold 3 with maxima 2 and 3 decodes a sample block") {
    const auto inst = make(2, 3, FunctionSpec::threshold(3), 2);
    const auto run = run_two_node(inst, std::vector<int>{2, 0}, std::vector<int>{1, 3});
    CHECK(run.f_node1 == std::vector<int>{1, 1});  // sums 3 and 3
    CHECK(run.f_node2 == std::vector<int>{1, 1});
}

TEST_CASE("worst case bits: boolean AND at block length 8 for both starters") {
    for (int starter : {1, 2}) {
        const auto inst = make(1, 1, FunctionSpec::threshold(2), 8, starter);
        const auto wc = worst_case_bits(inst);
        CHECK(wc.bits == 13);  // ceil(8 log2 3)
        CHECK(wc.pairs_checked == 65536);
        // The witness reproduces the reported count.
        const auto replay = run_two_node(inst, wc.x1, wc.x2);
        CHECK(replay.transcript.total_bits() == wc.bits);
    }
}

TEST_CASE("worst case bits: threshold 3, maxima 2 and 3, block 4, node 1 starts") {
    const auto wc = worst_case_bits(make(2, 3, FunctionSpec::threshold(3), 4));
    CHECK(wc.bits == 11);  // ceil(4 log2 6)
}

TEST_CASE("worst case bits: unreachable threshold never communicates") {
    const auto wc = worst_case_bits(make(3, 3, FunctionSpec::threshold(7), 2));
    CHECK(wc.bits == 0);
}

TEST_CASE("zero error and tightness across the desk-scale threshold family") {
    for (int m1 = 0; m1 <= 2; ++m1)
        for (int m2 = 0; m2 <= 2; ++m2)
            for (int theta = 0; theta <= m1 + m2 + 1; ++theta)
                for (int B = 1; B <= 3; ++B) {
                    std::size_t worst[3] = {0, 0, 0};
                    for (int starter : {1, 2}) {
                        CAPTURE(m1);
                        CAPTURE(m2);
                        CAPTURE(theta);
                        CAPTURE(B);
                        CAPTURE(starter);
                        const auto inst = make(m1, m2, FunctionSpec::threshold(theta), B, starter);
                        check_zero_error(inst);
                        const auto wc = worst_case_bits(inst);
                        worst[static_cast<std::size_t>(starter)] = wc.bits;
                        const auto rep = threshold_complexity(theta, m1, m2);
                        if (rep.case_tag == CaseTag::constant) {
                            REQUIRE(wc.bits == 0);
                        } else {
                            // Meets the fooling-set bound within the ceiling bit.
                            REQUIRE(wc.bits ==
                                    static_cast<std::size_t>(ceil_log2_pow_wide(rep.fooling_size, B)));
                        }
                    }
                    REQUIRE(worst[1] == worst[2]);  // twin strategies match
                }
}

TEST_CASE("middle-threshold starter uses the fixed-length scheme") {
    // m1 < theta <= m2 and node 1 starting: every codeword is the raw block
    // at ceil(B log2(m1+1)) bits and the responder replies B bits.
    const auto inst = make(2, 5, FunctionSpec::threshold(4), 3);
    const TwoNodeEngine engine(inst);
    CHECK(engine.partition().size() == 3);
    CHECK(engine.partition().ambiguous_count() == 3);
    const int fixed = ceil_log2_pow_wide(3, 3);  // ceil(3 log2 3) = 5
    std::vector<int> x1(3), x2(3, 0);
    for (int a = 0; a <= 2; ++a)
        for (int b = 0; b <= 2; ++b)
            for (int c = 0; c <= 2; ++c) {
                x1 = {a, b, c};
                const auto run = engine.run(x1, x2);
                CHECK(run.transcript.events[0].bits.size() == static_cast<std::size_t>(fixed));
                CHECK(run.transcript.events[1].bits.size() == 3);
            }
    CHECK(worst_case_bits(inst).bits == static_cast<std::size_t>(fixed + 3));
    CHECK(fixed + 3 == ceil_log2_pow_wide(2 * 2 + 2, 3));
}

TEST_CASE("separation shapes match the threshold case structure") {
    // Low threshold: effective alphabet {0..theta}, ambiguous below theta.
    const TwoNodeEngine low(make(4, 6, FunctionSpec::threshold(3), 1));
    REQUIRE(low.partition().size() == 4);
    CHECK(low.partition().classes[3] == std::vector<int>{3, 4});
    CHECK(low.partition().ambiguous_count() == 3);
    CHECK(low.partition().a1_class == 3);

    // High threshold: low letters merge into the constant-0 class.
    const TwoNodeEngine high(make(3, 2, FunctionSpec::threshold(4), 1));
    REQUIRE(high.partition().size() == 3);
    CHECK(high.partition().classes[0] == std::vector<int>{0, 1});  // letters below theta-m2
    CHECK(high.partition().a0_class == 0);
    CHECK(high.partition().ambiguous_count() == 2);

    // Middle threshold with node 2 starting: both tails merge.
    const TwoNodeEngine middle(make(2, 6, FunctionSpec::threshold(4), 1, 2));
    REQUIRE(middle.partition().size() == 4);
    CHECK(middle.partition().classes[0] == std::vector<int>{0, 1});   // always 0
    CHECK(middle.partition().classes[3] == std::vector<int>{4, 5, 6});  // always 1
    CHECK(middle.partition().ambiguous_count() == 2);
}

TEST_CASE("sum-interval runs inside the bound sandwich") {
    const auto inst = make(4, 5, FunctionSpec::interval(2, 3), 2);
    const auto wc = worst_case_bits(inst);
    CHECK(wc.bits <= 7);  // ceil(2 log2 9)
    CHECK(wc.bits >= 5);  // ceil(2 log2 5)
    check_zero_error(inst);

    const auto constant = make(3, 3, FunctionSpec::interval(0, 6), 2);
    CHECK(worst_case_bits(constant).bits == 0);

    const auto run = run_interval(make(2, 2, FunctionSpec::interval(2, 2), 1),
                                  std::vector<int>{1}, std::vector<int>{1});
    CHECK(run.f_node1 == std::vector<int>{1});
    CHECK(run.f_node2 == std::vector<int>{1});

    CHECK_THROWS_AS(run_interval(make(1, 1, FunctionSpec::threshold(1), 1),
                                 std::vector<int>{0}, std::vector<int>{0}),
                    std::invalid_argument);
}

TEST_CASE("sum-interval zero error across a small family, both starters") {
    for (int a = 0; a <= 3; ++a)
        for (int b = a; b <= 4; ++b)
            for (int starter : {1, 2})
                for (int B = 1; B <= 2; ++B) {
                    const auto inst = make(3, 2, FunctionSpec::interval(a, b), B, starter);
                    CAPTURE(a);
                    CAPTURE(b);
                    CAPTURE(starter);
                    CAPTURE(B);
                    check_zero_error(inst);
                }
}

TEST_CASE("general sum-dependent tables run when outputs are binary") {
    const auto parity = FunctionSpec::general({0, 1, 0, 1, 0, 1, 0});
    const auto inst = make(3, 3, parity, 2);
    check_zero_error(inst);
    // Both classes ambiguous: 2 classes, budget ceil(B log2 4) = 2B.
    CHECK(worst_case_bits(inst).bits == 4);

    const auto wide = FunctionSpec::general({0, 1, 2, 1});
    CHECK_THROWS_AS(run_two_node(make(2, 1, wide, 1), std::vector<int>{0}, std::vector<int>{0}),
                    std::domain_error);
}

TEST_CASE("transcript replay reproduces the run") {
    const auto inst = make(2, 3, FunctionSpec::threshold(3), 2);
    const std::vector<int> x1{2, 1}, x2{0, 3};
    const auto run = run_two_node(inst, x1, x2);
    CHECK(verify_transcript(inst, x1, x2, run.transcript));
    Transcript tampered = run.transcript;
    tampered.events[0].bits.push_back(true);
    CHECK_FALSE(verify_transcript(inst, x1, x2, tampered));
}

TEST_CASE("two-node input validation") {
    const auto inst = make(2, 2, FunctionSpec::threshold(2), 2);
    CHECK_THROWS_AS(run_two_node(inst, std::vector<int>{3, 0}, std::vector<int>{0, 0}),
                    std::domain_error);
    CHECK_THROWS_AS(run_two_node(inst, std::vector<int>{0}, std::vector<int>{0, 0}),
                    std::domain_error);
    auto guarded = make(7, 7, FunctionSpec::threshold(3), 16);
    CHECK_THROWS_AS(worst_case_bits(guarded), resource_error);
}
