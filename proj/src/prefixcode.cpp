#include "symfun/prefixcode.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <stdexcept>

#include "symfun/errors.hpp"

namespace symfun {

namespace {

// Smallest L with base^exp <= 2^L; throws if base^exp leaves uint64 range.
int ceil_log2_pow(std::uint64_t base, int exp) {
    if (base == 0) throw std::invalid_argument("ceil_log2_pow: base 0");
    std::uint64_t pow = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && pow > UINT64_MAX / base)
            throw resource_error("codebook: alphabet^B does not fit in 64 bits");
        pow *= base;
    }
    return pow <= 1 ? 0 : std::bit_width(pow - 1);
}

}  // namespace

Codebook::Codebook(std::vector<int> alphabet, std::vector<bool> ambiguous, int block_len)
    : alphabet_(std::move(alphabet)),
      ambiguous_(std::move(ambiguous)),
      k_(static_cast<int>(alphabet_.size())),
      block_len_(block_len) {
    if (k_ < 1) throw std::invalid_argument("codebook: empty alphabet");
    if (block_len_ < 1) throw std::invalid_argument("codebook: block length must be >= 1");
    if (ambiguous_.size() != alphabet_.size())
        throw std::invalid_argument("codebook: ambiguous flags must match the alphabet");
    for (int i = 0; i < k_; ++i) {
        if (alphabet_[static_cast<std::size_t>(i)] < 0)
            throw std::invalid_argument("codebook: letters must be nonnegative");
        if (i > 0 && alphabet_[static_cast<std::size_t>(i)] <= alphabet_[static_cast<std::size_t>(i) - 1])
            throw std::invalid_argument("codebook: letters must be strictly ascending");
    }
    for (int i = 0; i < k_; ++i)
        if (ambiguous_[static_cast<std::size_t>(i)]) ++r_;

    letter_pos_.assign(static_cast<std::size_t>(alphabet_.back()) + 1, -1);
    for (int i = 0; i < k_; ++i) letter_pos_[static_cast<std::size_t>(alphabet_[static_cast<std::size_t>(i)])] = i;

    if (k_ == 1) {
        // Single-letter alphabet: one block, a zero-length codeword. With the
        // letter ambiguous the budget is all reply bits (L = B).
        budget_ = (r_ == 1) ? block_len_ : 0;
        return;
    }

    // Guard k^B before building any tables.
    std::uint64_t blocks = 1;
    for (int i = 0; i < block_len_; ++i) {
        if (blocks > guard::max_codebook_blocks / static_cast<std::uint64_t>(k_))
            throw resource_error("codebook: k^B exceeds the enumeration guard");
        blocks *= static_cast<std::uint64_t>(k_);
    }

    budget_ = ceil_log2_pow(static_cast<std::uint64_t>(k_ + r_), block_len_);

    const std::size_t stride = static_cast<std::size_t>(block_len_) + 1;
    ways_.assign(stride * stride, 0);
    ways_[0] = 1;  // ways(0, 0)
    for (int s = 1; s <= block_len_; ++s)
        for (int j = 0; j <= s; ++j) {
            std::uint64_t w = ways(s - 1, j) * static_cast<std::uint64_t>(k_ - r_);
            if (j > 0) w += ways(s - 1, j - 1) * static_cast<std::uint64_t>(r_);
            ways_[static_cast<std::size_t>(s) * stride + static_cast<std::size_t>(j)] = w;
        }

    group_count_.assign(stride, 0);
    group_first_.assign(stride, 0);
    for (int a = 0; a <= block_len_; ++a) group_count_[static_cast<std::size_t>(a)] = ways(block_len_, a);

    // Shorter codewords belong to blocks with more ambiguous letters, so
    // groups run from a = B down to a = 0 in canonical (length) order.
    bool have_prev = false;
    int prev_a = 0;
    for (int a = block_len_; a >= 0; --a) {
        if (group_count_[static_cast<std::size_t>(a)] == 0) continue;
        if (!have_prev) {
            group_first_[static_cast<std::size_t>(a)] = 0;
            have_prev = true;
        } else {
            const int shift = prev_a - a;  // length grows by the ambiguity drop
            group_first_[static_cast<std::size_t>(a)] =
                (group_first_[static_cast<std::size_t>(prev_a)] + group_count_[static_cast<std::size_t>(prev_a)])
                << shift;
        }
        prev_a = a;
    }
}

Codebook Codebook::canonical(int alphabet_size, int ambiguous_count, int block_len) {
    if (ambiguous_count < 0 || ambiguous_count > alphabet_size)
        throw std::invalid_argument("codebook: need 0 <= r <= k");
    std::vector<int> letters(static_cast<std::size_t>(alphabet_size));
    std::vector<bool> amb(static_cast<std::size_t>(alphabet_size), false);
    for (int i = 0; i < alphabet_size; ++i) {
        letters[static_cast<std::size_t>(i)] = i;
        if (i < ambiguous_count) amb[static_cast<std::size_t>(i)] = true;
    }
    return Codebook(std::move(letters), std::move(amb), block_len);
}

int Codebook::index_of(int letter) const {
    if (letter < 0 || static_cast<std::size_t>(letter) >= letter_pos_.size() ||
        letter_pos_[static_cast<std::size_t>(letter)] < 0)
        throw std::domain_error("codebook: letter " + std::to_string(letter) + " not in alphabet");
    return letter_pos_[static_cast<std::size_t>(letter)];
}

int Codebook::ambiguous_in(std::span<const int> block) const {
    if (static_cast<int>(block.size()) != block_len_)
        throw std::domain_error("codebook: block length mismatch");
    int a = 0;
    for (int letter : block)
        if (ambiguous_[static_cast<std::size_t>(index_of(letter))]) ++a;
    return a;
}

int Codebook::word_length(std::span<const int> block) const {
    return budget_ - ambiguous_in(block);
}

std::uint64_t Codebook::code_value(std::span<const int> block, int& length_out) const {
    const int amb_total = ambiguous_in(block);  // also validates letters
    length_out = budget_ - amb_total;
    if (k_ == 1) return 0;

    // Lexicographic rank within the group of blocks sharing this ambiguity.
    std::uint64_t rank = 0;
    int used = 0;
    for (int p = 0; p < block_len_; ++p) {
        const int s = block_len_ - 1 - p;
        const int idx = index_of(block[static_cast<std::size_t>(p)]);
        for (int c = 0; c < idx; ++c) {
            const int j = amb_total - used - (ambiguous_[static_cast<std::size_t>(c)] ? 1 : 0);
            if (j >= 0 && j <= s) rank += ways(s, j);
        }
        if (ambiguous_[static_cast<std::size_t>(idx)]) ++used;
    }
    return group_first_[static_cast<std::size_t>(amb_total)] + rank;
}

void Codebook::encode_append(std::span<const int> block, BitVec& out) const {
    int len = 0;
    const std::uint64_t value = code_value(block, len);
    out.append_bits(value, len);
}

BitVec Codebook::encode(std::span<const int> block) const {
    BitVec out;
    encode_append(block, out);
    return out;
}

void Codebook::unrank_group(int amb_total, std::uint64_t index, std::vector<int>& out) const {
    out.resize(static_cast<std::size_t>(block_len_));
    int remaining = amb_total;
    for (int p = 0; p < block_len_; ++p) {
        const int s = block_len_ - 1 - p;
        bool placed = false;
        for (int c = 0; c < k_; ++c) {
            const int j = remaining - (ambiguous_[static_cast<std::size_t>(c)] ? 1 : 0);
            const std::uint64_t w = (j >= 0 && j <= s) ? ways(s, j) : 0;
            if (index < w) {
                out[static_cast<std::size_t>(p)] = alphabet_[static_cast<std::size_t>(c)];
                remaining = j;
                placed = true;
                break;
            }
            index -= w;
        }
        if (!placed) throw protocol_error("codebook: unrank fell off the alphabet");
    }
}

std::vector<int> Codebook::decode(BitReader& reader) const {
    if (k_ == 1) return std::vector<int>(static_cast<std::size_t>(block_len_), alphabet_[0]);

    std::uint64_t value = 0;
    int have = 0;
    for (int a = block_len_; a >= 0; --a) {
        if (group_count_[static_cast<std::size_t>(a)] == 0) continue;
        const int len = budget_ - a;
        while (have < len) {
            value = (value << 1) | (reader.take1() ? 1u : 0u);
            ++have;
        }
        const std::uint64_t offset = value - group_first_[static_cast<std::size_t>(a)];
        if (offset < group_count_[static_cast<std::size_t>(a)]) {
            std::vector<int> block;
            unrank_group(a, offset, block);
            return block;
        }
    }
    throw framing_error("codebook: stream does not start with a codeword");
}

Codebook::DecodeResult Codebook::decode_stream(const BitVec& bits, std::size_t start) const {
    BitReader reader(bits, start);
    DecodeResult res;
    res.block = decode(reader);
    res.bits_consumed = reader.position() - start;
    return res;
}

std::uint64_t Codebook::kraft_numerator() const {
    std::uint64_t pow = 1;
    for (int i = 0; i < block_len_; ++i) {
        const auto base = static_cast<std::uint64_t>(k_ + r_);
        if (pow > UINT64_MAX / base) throw resource_error("kraft numerator overflows");
        pow *= base;
    }
    return pow;
}

std::uint64_t Codebook::block_count() const {
    std::uint64_t n = 1;
    for (int i = 0; i < block_len_; ++i) n *= static_cast<std::uint64_t>(k_);
    return n;
}

void Codebook::for_each_block(
    const std::function<void(std::span<const int>, const BitVec&)>& fn) const {
    std::vector<int> idx(static_cast<std::size_t>(block_len_), 0);
    std::vector<int> block(static_cast<std::size_t>(block_len_));
    for (;;) {
        for (int p = 0; p < block_len_; ++p)
            block[static_cast<std::size_t>(p)] = alphabet_[static_cast<std::size_t>(idx[static_cast<std::size_t>(p)])];
        fn(block, encode(block));
        int p = block_len_ - 1;
        while (p >= 0 && idx[static_cast<std::size_t>(p)] == k_ - 1) idx[static_cast<std::size_t>(p--)] = 0;
        if (p < 0) break;
        ++idx[static_cast<std::size_t>(p)];
    }
}

void Codebook::dump_csv(std::ostream& os) const {
    for_each_block([&os](std::span<const int> block, const BitVec& code) {
        for (std::size_t i = 0; i < block.size(); ++i) {
            if (i) os << ' ';
            os << block[i];
        }
        os << ';' << code.to_string() << '\n';
    });
}

}  // namespace symfun
