#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "symfun/errors.hpp"

namespace symfun {

// Growable bit string. Bit 0 is the first bit sent on the wire.
class BitVec {
public:
    BitVec() = default;

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool operator[](std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void push_back(bool bit) {
        if ((size_ & 63) == 0) words_.push_back(0);
        if (bit) words_.back() |= std::uint64_t{1} << (size_ & 63);
        ++size_;
    }

    // Appends the low `len` bits of `value`, most significant first.
    void append_bits(std::uint64_t value, int len) {
        for (int i = len - 1; i >= 0; --i) push_back((value >> i) & 1u);
    }

    void append(const BitVec& other) {
        for (std::size_t i = 0; i < other.size_; ++i) push_back(other[i]);
    }

    std::string to_string() const {
        std::string s;
        s.reserve(size_);
        for (std::size_t i = 0; i < size_; ++i) s.push_back((*this)[i] ? '1' : '0');
        return s;
    }

    static BitVec from_string(std::string_view s) {
        BitVec v;
        for (char c : s) {
            if (c != '0' && c != '1') throw std::invalid_argument("BitVec: expected a 01-string");
            v.push_back(c == '1');
        }
        return v;
    }

    friend bool operator==(const BitVec& a, const BitVec& b) {
        if (a.size_ != b.size_) return false;
        for (std::size_t i = 0; i < a.size_; ++i)
            if (a[i] != b[i]) return false;
        return true;
    }

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

// Cursor over a BitVec; throws framing_error on under-run.
class BitReader {
public:
    explicit BitReader(const BitVec& bits, std::size_t start = 0) : bits_(&bits), pos_(start) {}

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bits_->size() - pos_; }

    bool take1() {
        if (pos_ >= bits_->size()) throw framing_error("bit stream exhausted");
        return (*bits_)[pos_++];
    }

    std::uint64_t take(int n) {
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v = (v << 1) | (take1() ? 1u : 0u);
        return v;
    }

private:
    const BitVec* bits_;
    std::size_t pos_;
};

}  // namespace symfun
