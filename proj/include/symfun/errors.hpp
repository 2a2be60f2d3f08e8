#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace symfun {

// Enumeration guard would be exceeded; shrink the instance or use
// randomized verification instead.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// A bit stream does not begin with a valid codeword.
class framing_error : public std::runtime_error {
public:
    explicit framing_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal protocol invariant failed. This is a bug, not a usage error.
class protocol_error : public std::logic_error {
public:
    explicit protocol_error(const std::string& what) : std::logic_error(what) {}
};

namespace guard {
// Codebooks enumerate k^B blocks; keep them in desk-scale memory.
inline constexpr std::uint64_t max_codebook_blocks = std::uint64_t{1} << 24;
// Exhaustive sweeps enumerate the full input product space.
inline constexpr std::uint64_t max_sweep_space = std::uint64_t{1} << 26;
// Cut enumeration walks 2^(n-1) bipartitions.
inline constexpr int max_cut_nodes = 16;
}  // namespace guard

}  // namespace symfun
