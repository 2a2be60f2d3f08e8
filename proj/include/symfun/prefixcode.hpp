#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "symfun/bitvec.hpp"

namespace symfun {

// Prefix-free block code over an effective alphabet. The codeword of a block
// has length L - (number of ambiguous letters in the block), where
// L = ceil(B * log2(k + r)); the Kraft inequality makes this feasible because
// every ambiguous letter contributes a factor 2 and every unambiguous letter
// a factor 1, so sum 2^(ambiguous count) = (k + r)^B <= 2^L.
//
// The assignment is canonical so transcripts are reproducible bit-exactly:
// blocks are sorted by (length ascending, block lexicographic) and codewords
// are assigned by binary counting with left-shifts on each length increase.
// Codewords are computed combinatorially; the k^B blocks are never stored.
class Codebook {
public:
    // Alphabet letters must be distinct nonnegative integers in ascending
    // order; ambiguous[i] flags alphabet[i].
    Codebook(std::vector<int> alphabet, std::vector<bool> ambiguous, int block_len);

    // Letters 0..k-1 with the first r flagged ambiguous.
    static Codebook canonical(int alphabet_size, int ambiguous_count, int block_len);

    int block_length() const { return block_len_; }
    int alphabet_size() const { return k_; }
    int ambiguous_letters() const { return r_; }
    int total_budget() const { return budget_; }  // L
    const std::vector<int>& alphabet() const { return alphabet_; }
    bool is_ambiguous_letter(int letter) const { return ambiguous_[index_of(letter)]; }

    int ambiguous_in(std::span<const int> block) const;
    int word_length(std::span<const int> block) const;

    BitVec encode(std::span<const int> block) const;
    void encode_append(std::span<const int> block, BitVec& out) const;

    struct DecodeResult {
        std::vector<int> block;
        std::size_t bits_consumed = 0;
    };
    DecodeResult decode_stream(const BitVec& bits, std::size_t start = 0) const;
    // Reads one codeword from the cursor; throws framing_error when the
    // stream exhausts without matching a codeword.
    std::vector<int> decode(BitReader& reader) const;

    // Exact Kraft data: sum over blocks of 2^(budget - length) = (k+r)^B,
    // against a denominator of 2^budget.
    std::uint64_t kraft_numerator() const;

    std::uint64_t block_count() const;  // k^B

    // Enumerates blocks in lexicographic order with their codewords.
    void for_each_block(const std::function<void(std::span<const int>, const BitVec&)>& fn) const;

    // Rows "letter letter ...;bits", lexicographic block order.
    void dump_csv(std::ostream& os) const;

private:
    int index_of(int letter) const;
    std::uint64_t ways(int positions, int ambiguous) const {
        return ways_[static_cast<std::size_t>(positions) * (static_cast<std::size_t>(block_len_) + 1) +
                     static_cast<std::size_t>(ambiguous)];
    }
    std::uint64_t code_value(std::span<const int> block, int& length_out) const;
    void unrank_group(int amb_total, std::uint64_t index, std::vector<int>& out) const;

    std::vector<int> alphabet_;
    std::vector<bool> ambiguous_;
    std::vector<int> letter_pos_;   // letter value -> alphabet index, -1 if absent
    int k_ = 0;
    int r_ = 0;
    int block_len_ = 0;
    int budget_ = 0;  // L

    // ways_[s][j]: blocks of s letters containing exactly j ambiguous ones.
    std::vector<std::uint64_t> ways_;
    std::vector<std::uint64_t> group_count_;  // indexed by ambiguous count
    std::vector<std::uint64_t> group_first_;  // canonical first code per group
};

}  // namespace symfun
