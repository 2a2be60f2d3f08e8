#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "symfun/funcspec.hpp"
#include "symfun/network.hpp"
#include "symfun/sweep.hpp"
#include "symfun/twonode.hpp"

namespace symfun {

// Fixed, portable pseudorandom generator so randomized reports are
// reproducible across implementations: splitmix64. Trial t of a run with
// seed s draws from a stream seeded s + t * 0x9E3779B97F4A7C15; letters are
// taken as next() mod alphabet, nodes in id order, instances in block order.
struct SplitMix64 {
    std::uint64_t state = 0;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

inline std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t trial) {
    return seed + trial * 0x9E3779B97F4A7C15ull;
}

struct TwoNodeScenario {
    TwoNodeInstance inst;
};
struct TreeScenario {
    Network tree;
    FunctionSpec spec;
    int block_len = 1;
    std::optional<int> root;
};
struct SubtreeScenario {
    Network net;   // transport network; idle edges report zero bits
    Network tree;  // spanning subtree actually used
    FunctionSpec spec;
    int block_len = 1;
    std::optional<int> root;
};
using Scenario = std::variant<TwoNodeScenario, TreeScenario, SubtreeScenario>;

struct EdgeRow {
    std::pair<int, int> edge;
    double lower_rate = 0.0;  // bits per instance
    double upper_rate = 0.0;
    long long lower_bits = 0;  // floor(B * lower_rate)
    long long upper_bits = 0;  // ceil(B * upper_rate)
    std::size_t measured_bits = 0;
    std::size_t up_bits = 0;    // split at the witness
    std::size_t down_bits = 0;
    std::uint64_t fooling_size = 1;
    bool within_bounds = true;
    std::vector<std::vector<int>> witness;  // per-node blocks achieving measured_bits
};

struct VerificationReport {
    std::string scenario;  // "two-node" | "tree" | "subtree-scheme"
    std::string mode;      // "exhaustive" | "random"
    nlohmann::json function;
    int block_length = 1;
    std::vector<std::pair<int, int>> nodes;  // (id, alphabet size)
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::uint64_t instances_checked = 0;
    std::uint64_t decode_errors = 0;
    std::vector<EdgeRow> edges;

    bool all_within_bounds() const;
    bool pass() const { return decode_errors == 0 && all_within_bounds(); }

    nlohmann::ordered_json to_json() const;
    std::string to_json_string() const;
    // One row per edge: edge, lower, measured, upper, pass.
    void write_csv(std::ostream& os) const;
};

// Runs the scenario's protocol on every input assignment and reports
// decode errors, per-edge worst-case totals and the bound comparison.
VerificationReport exhaustive_verify(const Scenario& scenario, sweep::Policy policy = {});

// Same checks over a deterministic pseudorandom assignment stream; the
// measured worst case is a lower estimate of the true one.
VerificationReport random_verify(const Scenario& scenario, std::uint64_t trials,
                                 std::uint64_t seed, sweep::Policy policy = {});

}  // namespace symfun
