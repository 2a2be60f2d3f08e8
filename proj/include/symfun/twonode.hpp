#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "symfun/funcspec.hpp"
#include "symfun/prefixcode.hpp"
#include "symfun/sweep.hpp"
#include "symfun/transcript.hpp"

namespace symfun {

// Two nodes, letters 0..m1 at node 1 and 0..m2 at node 2, computing a
// sum-dependent function over blocks of B independent instances.
struct TwoNodeInstance {
    int m1 = 0;
    int m2 = 0;
    FunctionSpec spec;
    int B = 1;
    int starter = 1;  // 1 or 2
};

struct TwoNodeRun {
    Transcript transcript;
    std::vector<int> f_node1;  // function block decoded at node 1
    std::vector<int> f_node2;
};

// Single-round strategy: the starter separates its alphabet, sends the
// prefix codeword of its class block, and the responder answers one
// function bit per instance whose starter class is still ambiguous, in
// block order. Immutable after construction; run calls are const and
// thread-safe given per-thread workspaces.
class TwoNodeEngine {
public:
    explicit TwoNodeEngine(TwoNodeInstance inst);

    const TwoNodeInstance& instance() const { return inst_; }
    const SeparationPartition& partition() const { return part_; }
    const Codebook& codebook() const { return codebook_; }
    int starter_max() const { return starter_max_; }
    int responder_max() const { return responder_max_; }

    std::uint64_t node1_block_count() const { return n1_blocks_; }
    std::uint64_t node2_block_count() const { return n2_blocks_; }
    std::uint64_t pair_count() const { return n1_blocks_ * n2_blocks_; }
    // Throws resource_error when the pair space exceeds the sweep guard.
    void ensure_sweepable() const;

    struct Outcome {
        std::uint32_t up_bits = 0;    // starter codeword
        std::uint32_t down_bits = 0;  // reply bits
        bool decode_ok = true;
        std::uint32_t total() const { return up_bits + down_bits; }
    };

    struct Workspace {
        std::vector<int> starter_block, responder_block, classes, reps;
        BitVec bits;
    };
    Workspace make_workspace() const;

    // pair_rank = x1_rank * node2_block_count() + x2_rank, blocks ranked
    // lexicographically with instance 0 most significant.
    Outcome run_pair_ranked(std::uint64_t pair_rank, Workspace& ws) const;
    Outcome run_blocks(std::span<const int> x1, std::span<const int> x2, Workspace& ws) const;

    void unrank_node1(std::uint64_t rank, std::vector<int>& out) const;
    void unrank_node2(std::uint64_t rank, std::vector<int>& out) const;

    // Full run with transcript; exercises the real encoder and the
    // streaming decoder.
    TwoNodeRun run(std::span<const int> x1, std::span<const int> x2) const;

private:
    void validate_block(std::span<const int> block, int max_letter) const;
    Outcome run_letters(std::span<const int> xs, std::span<const int> xr, Workspace& ws,
                        bool cached) const;
    static void unrank(std::uint64_t rank, int base, std::vector<int>& out);

    TwoNodeInstance inst_;
    int starter_max_ = 0;
    int responder_max_ = 0;
    std::vector<std::uint8_t> truth_;  // by total sum
    SeparationPartition part_;
    std::vector<int> reps_;           // class -> representative letter
    std::vector<std::uint8_t> amb_;   // class -> needs a reply bit
    std::vector<int> const_val_;      // class -> constant value, -1 if ambiguous
    Codebook codebook_;
    std::uint64_t n1_blocks_ = 1, n2_blocks_ = 1;

    // Per starter-block cache: class sequence and codeword length, with the
    // encoder/decoder round trip checked once per block at build time.
    bool cached_ = false;
    std::vector<int> cache_classes_;
    std::vector<std::uint32_t> cache_len_;
};

TwoNodeRun run_two_node(const TwoNodeInstance& inst, std::span<const int> x1,
                        std::span<const int> x2);

// Same runner restricted to sum-interval specs.
TwoNodeRun run_interval(const TwoNodeInstance& inst, std::span<const int> x1,
                        std::span<const int> x2);

struct WorstCase {
    std::size_t bits = 0;
    std::vector<int> x1, x2;  // an argmax input pair (lexicographically first)
    std::uint64_t pairs_checked = 0;
};

// Maximum transcript length over every input pair, by exhaustive sweep.
WorstCase worst_case_bits(const TwoNodeInstance& inst, sweep::Policy policy = {});

// Replays the deterministic protocol and checks the transcript matches.
bool verify_transcript(const TwoNodeInstance& inst, std::span<const int> x1,
                       std::span<const int> x2, const Transcript& transcript);

}  // namespace symfun
