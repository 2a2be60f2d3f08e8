#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "symfun/bounds.hpp"
#include "symfun/funcspec.hpp"
#include "symfun/network.hpp"
#include "symfun/prefixcode.hpp"
#include "symfun/sweep.hpp"
#include "symfun/transcript.hpp"

namespace symfun {

// Removing an edge splits a tree in two; A_e is the side with the smaller
// maximum partial sum (ties go to the side holding the smaller node id).
// Returns (A_e, complement) as sorted id lists.
std::pair<std::vector<int>, std::vector<int>> edge_components(const Network& tree,
                                                              std::pair<int, int> edge);

// Per-edge complexity of a sum-threshold function: the edge reduces to a
// two-node problem between the super-nodes on either side, with maxima
// equal to each side's maximum partial sum.
BoundReport edge_complexity(const Network& tree, const FunctionSpec& spec,
                            std::pair<int, int> edge);

struct TreeRun {
    // Aligned with tree.edges; each transcript holds the convergecast
    // (child -> parent) event and the broadcast reply.
    std::vector<std::pair<std::pair<int, int>, Transcript>> per_edge;
    std::vector<std::vector<int>> f_blocks;  // per node, in id order
};

struct EdgeAccount {
    std::pair<int, int> edge;
    std::size_t up_bits = 0;    // at the worst-case witness
    std::size_t down_bits = 0;
    std::size_t total_bits = 0;  // worst-case total over the sweep
    double bound_lower = 0.0;    // B * log2 |Z_e| (thresholds)
    double bound_upper = 0.0;    // ceil of the same
    std::uint64_t fooling_size = 1;
};

// Convergecast/broadcast engine over a rooted tree. Each node sends its
// subtree's separated letter to its parent once all children reported;
// the root computes the function and replies one bit per ambiguous
// instance down every edge. Immutable after construction.
class TreeEngine {
public:
    TreeEngine(Network tree, FunctionSpec spec, int block_len,
               std::optional<int> root_id = std::nullopt);

    const Network& network() const { return net_; }
    const FunctionSpec& spec() const { return spec_; }
    int block_length() const { return block_len_; }
    int root_index() const { return root_; }
    int edge_count() const { return static_cast<int>(net_.edges.size()); }

    std::uint64_t assignment_count() const { return assignments_; }
    void ensure_sweepable() const;

    // Maximum partial sum of the subtree hanging below the edge.
    long long edge_subtree_sum(int edge_idx) const;
    const Codebook& edge_codebook(int edge_idx) const;
    int edge_budget(int edge_idx) const;  // L_e

    struct Workspace {
        std::vector<int> letters;   // node-major, B per node
        std::vector<int> repval;    // representative value sent upward
        std::vector<int> cls;       // class per node per instance
        std::vector<std::uint8_t> decoded;
        std::vector<int> reps;
        BitVec bits;
    };
    Workspace make_workspace() const;

    // Runs one assignment; fills per-edge up/down bit counts (arrays of
    // edge_count() entries) and returns whether every node decoded the
    // true function block.
    bool run_ranked(std::uint64_t rank, Workspace& ws, std::uint32_t* up, std::uint32_t* down) const;
    // Same, with ws.letters already holding the assignment (node-major).
    bool run_prefilled(Workspace& ws, std::uint32_t* up, std::uint32_t* down) const;

    void unrank_assignment(std::uint64_t rank, std::vector<std::vector<int>>& blocks) const;

    // Full event-level simulation with causality assertions.
    TreeRun run(const std::vector<std::vector<int>>& blocks) const;

private:
    struct EdgeInfo {
        int edge_idx = -1;          // into net_.edges
        SeparationPartition part;
        std::vector<int> reps;
        std::vector<std::uint8_t> amb;
        std::vector<int> const_val;
        std::unique_ptr<Codebook> codebook;
    };

    bool run_letters(Workspace& ws, std::uint32_t* up, std::uint32_t* down) const;

    Network net_;
    FunctionSpec spec_;
    int block_len_ = 1;
    int root_ = 0;
    long long total_sum_ = 0;
    std::vector<int> parent_;                 // node index -> parent index (-1 at root)
    std::vector<std::vector<int>> children_;  // ascending
    std::vector<int> bfs_;                    // parents before children
    std::vector<long long> sub_max_;
    std::vector<std::unique_ptr<EdgeInfo>> edge_of_node_;  // null at root
    std::vector<std::uint8_t> truth_;
    std::uint64_t assignments_ = 1;
};

TreeRun run_tree_protocol(const Network& tree, const FunctionSpec& spec, int block_len,
                          const std::vector<std::vector<int>>& blocks,
                          std::optional<int> root_id = std::nullopt);

// Bound metadata for one edge of the engine; measurements left zero.
EdgeAccount edge_bound_template(const TreeEngine& engine, int edge_idx);

// Exhaustive per-edge worst-case bit totals. Thresholds carry fooling-set
// bounds; other binary specs report the construction budget as the upper
// bound and 0 as the lower.
std::map<std::pair<int, int>, EdgeAccount> worst_case_edge_bits(
    const Network& tree, const FunctionSpec& spec, int block_len,
    sweep::Policy policy = {}, std::optional<int> root_id = std::nullopt);

}  // namespace symfun
