#include "symfun/prefixcode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "symfun/errors.hpp"

using namespace symfun;

namespace {

// Reference construction: materialize every block, sort by (length, lex),
// assign codewords by binary counting with shifts. Independent of the
// combinatorial path under test.
std::map<std::vector<int>, std::string> oracle_codebook(int k, int r, int B) {
    const int L = static_cast<int>(std::ceil(B * std::log2(k + r) - 1e-12));
    std::vector<std::vector<int>> blocks;
    std::vector<int> cur(static_cast<std::size_t>(B), 0);
    for (;;) {
        blocks.push_back(cur);
        int p = B - 1;
        while (p >= 0 && cur[static_cast<std::size_t>(p)] == k - 1) cur[static_cast<std::size_t>(p--)] = 0;
        if (p < 0) break;
        ++cur[static_cast<std::size_t>(p)];
    }
    auto length_of = [&](const std::vector<int>& b) {
        int amb = 0;
        for (int letter : b)
            if (letter < r) ++amb;
        return L - amb;
    };
    std::stable_sort(blocks.begin(), blocks.end(),
                     [&](const auto& x, const auto& y) { return length_of(x) < length_of(y); });
    std::map<std::vector<int>, std::string> words;
    std::uint64_t code = 0;
    int prev_len = length_of(blocks.front());
    bool first = true;
    for (const auto& b : blocks) {
        const int len = length_of(b);
        if (!first) code = (code + 1) << (len - prev_len);
        first = false;
        prev_len = len;
        std::string bits;
        for (int i = len - 1; i >= 0; --i) bits.push_back(((code >> i) & 1) ? '1' : '0');
        words[b] = bits;
    }
    return words;
}

}  // namespace

TEST_CASE("codebook for a two-letter alphabet with one ambiguous letter") {
    const auto cb = Codebook::canonical(2, 1, 1);
    CHECK(cb.total_budget() == 2);
    CHECK(cb.encode(std::vector<int>{0}).to_string() == "0");
    CHECK(cb.encode(std::vector<int>{1}).to_string() == "10");
    CHECK(cb.kraft_numerator() == 3);  // 3/4 against 2^L = 4
}

TEST_CASE("codebook for the three-letter alphabet, two ambiguous, blocks of two") {
    const auto cb = Codebook::canonical(3, 2, 2);
    CHECK(cb.total_budget() == 5);
    CHECK(cb.word_length(std::vector<int>{0, 0}) == 3);
    CHECK(cb.kraft_numerator() == 25);  // 25/32
    // All nine blocks round trip.
    cb.for_each_block([&](std::span<const int> block, const BitVec& code) {
        const auto dec = cb.decode_stream(code);
        CHECK(dec.block == std::vector<int>(block.begin(), block.end()));
        CHECK(dec.bits_consumed == code.size());
    });
}

TEST_CASE("single-letter alphabet carries no information") {
    const auto cb = Codebook::canonical(1, 1, 4);
    CHECK(cb.total_budget() == 4);
    CHECK(cb.encode(std::vector<int>{0, 0, 0, 0}).size() == 0);
    const auto dec = cb.decode_stream(BitVec::from_string("1010"));
    CHECK(dec.block == std::vector<int>{0, 0, 0, 0});
    CHECK(dec.bits_consumed == 0);
}

TEST_CASE("streaming decode grabs exactly one codeword") {
    const auto cb = Codebook::canonical(2, 1, 1);
    const auto dec0 = cb.decode_stream(BitVec::from_string("011"));  // "0" ++ junk
    CHECK(dec0.block == std::vector<int>{0});
    CHECK(dec0.bits_consumed == 1);
    const auto dec1 = cb.decode_stream(BitVec::from_string("10"));
    CHECK(dec1.block == std::vector<int>{1});
    CHECK(dec1.bits_consumed == 2);
    CHECK_THROWS_AS(cb.decode_stream(BitVec::from_string("11")), framing_error);
    CHECK_THROWS_AS(cb.decode_stream(BitVec::from_string("1")), framing_error);
}

TEST_CASE("canonical assignment matches the materialized reference") {
    for (int k = 1; k <= 4; ++k)
        for (int r = 0; r <= k; ++r)
            for (int B = 1; B <= 3; ++B) {
                if (k == 1 && r == 0) continue;  // zero-budget corner checked elsewhere
                CAPTURE(k);
                CAPTURE(r);
                CAPTURE(B);
                const auto oracle = oracle_codebook(k, r, B);
                const auto cb = Codebook::canonical(k, r, B);
                cb.for_each_block([&](std::span<const int> block, const BitVec& code) {
                    REQUIRE(oracle.at(std::vector<int>(block.begin(), block.end())) ==
                            code.to_string());
                });
            }
}

TEST_CASE("codec family properties: prefix-free, Kraft, length law, round trip") {
    for (int k = 1; k <= 4; ++k)
        for (int r = (k == 1 ? 1 : 0); r <= k; ++r)
            for (int B = 1; B <= 4; ++B) {
                CAPTURE(k);
                CAPTURE(r);
                CAPTURE(B);
                const auto cb = Codebook::canonical(k, r, B);
                const int L = cb.total_budget();

                // Kraft: (k+r)^B <= 2^L, equality iff the budget is exact.
                const std::uint64_t numerator = cb.kraft_numerator();
                REQUIRE(numerator <= (std::uint64_t{1} << L));
                if ((std::uint64_t{1} << L) == numerator)
                    CHECK(std::pow(2.0, static_cast<double>(L) / B) == doctest::Approx(k + r));

                std::vector<std::string> words;
                cb.for_each_block([&](std::span<const int> block, const BitVec& code) {
                    // Length law: word length + ambiguous letters = L.
                    REQUIRE(static_cast<int>(code.size()) + cb.ambiguous_in(block) == L);
                    const auto dec = cb.decode_stream(code);
                    REQUIRE(dec.block == std::vector<int>(block.begin(), block.end()));
                    REQUIRE(dec.bits_consumed == code.size());
                    words.push_back(code.to_string());
                });
                for (std::size_t i = 0; i < words.size(); ++i)
                    for (std::size_t j = 0; j < words.size(); ++j)
                        if (i != j) REQUIRE(words[j].rfind(words[i], 0) != 0);  // no prefixes
            }
}

TEST_CASE("fixed-length corner: no ambiguous letters") {
    const auto cb = Codebook::canonical(3, 0, 2);
    CHECK(cb.total_budget() == 4);  // ceil(2 log2 3)
    cb.for_each_block([&](std::span<const int> block, const BitVec& code) {
        CHECK(code.size() == 4);
        CHECK(cb.decode_stream(code).block == std::vector<int>(block.begin(), block.end()));
    });
}

TEST_CASE("codebook guards and domain errors") {
    CHECK_THROWS_AS(Codebook::canonical(3, 2, 16), resource_error);  // 3^16 > 2^24
    const auto cb = Codebook::canonical(2, 1, 2);
    CHECK_THROWS_AS(cb.encode(std::vector<int>{0, 5}), std::domain_error);
    CHECK_THROWS_AS(cb.encode(std::vector<int>{0}), std::domain_error);
    CHECK_THROWS_AS(Codebook::canonical(2, 3, 1), std::invalid_argument);
}

TEST_CASE("csv dump lists blocks lexicographically") {
    const auto cb = Codebook::canonical(2, 1, 1);
    std::ostringstream os;
    cb.dump_csv(os);
    CHECK(os.str() == "0;0\n1;10\n");
}

TEST_CASE("non-contiguous alphabets with arbitrary ambiguous sets") {
    // Letters 1, 4, 7 with only the middle one ambiguous.
    Codebook cb({1, 4, 7}, {false, true, false}, 2);
    CHECK(cb.total_budget() == 4);  // ceil(2 log2 4)
    cb.for_each_block([&](std::span<const int> block, const BitVec& code) {
        const auto dec = cb.decode_stream(code);
        CHECK(dec.block == std::vector<int>(block.begin(), block.end()));
        CHECK(static_cast<int>(code.size()) + cb.ambiguous_in(block) == 4);
    });
}
