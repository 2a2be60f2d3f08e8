#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "symfun/funcspec.hpp"
#include "symfun/network.hpp"
#include "symfun/sweep.hpp"
#include "symfun/treenet.hpp"

namespace symfun {

// Super-node size convention for cut and star-mixing formulas. MaxSum uses
// each side's maximum partial sum (sum of l_i - 1), consistent with the
// two-node reduction used on trees; AlphabetSize plugs the alphabet sizes
// l_i in directly. Both are computed where they disagree.
enum class SumConvention { MaxSum, AlphabetSize };

std::string to_string(SumConvention conv);

// Bits that must cross the cut separating `side_ids` from the rest,
// per function instance.
double cutset_bound(const Network& net, const FunctionSpec& spec,
                    const std::vector<int>& side_ids, SumConvention conv = SumConvention::MaxSum);

struct CutRate {
    double rate = 0.0;           // max over cuts of bound / crossing edges
    double bound = 0.0;          // at the argmax cut
    int crossing = 0;            // at the argmax cut
    std::vector<int> side_ids;   // argmax cut side
    std::uint64_t cuts_checked = 0;
};

// Minimum symmetric per-edge rate consistent with every cut constraint;
// enumerates all 2^(n-1) - 1 bipartitions.
CutRate min_symmetric_cut_rate(const Network& net, const FunctionSpec& spec,
                               SumConvention conv = SumConvention::MaxSum,
                               sweep::Policy policy = {});

struct RateVector {
    std::vector<std::pair<int, int>> edges;
    std::vector<double> rate;  // bits per instance, aligned with edges
    double max_rate() const;
};

// Rates achieved by cycling the n star trees over equal sub-blocks of a
// complete graph: edge (i, j) carries (c_i + c_j) / n where
// c_i = min(log2(2*theta + 1), log2(2*w_i + 2)).
RateVector star_mix_rate(const Network& net, const FunctionSpec& spec,
                         SumConvention conv = SumConvention::AlphabetSize);

// Aggregation along one spanning subtree: tree edges carry the tree
// protocol's worst-case bits, all other edges carry zero.
std::map<std::pair<int, int>, EdgeAccount> spanning_tree_scheme(const Network& net,
                                                                const Network& tree,
                                                                const FunctionSpec& spec,
                                                                int block_len,
                                                                sweep::Policy policy = {});

struct Rational {
    long long num = 0;
    long long den = 1;
};

// Analytic per-edge rate of a weighted mixture of spanning subtrees
// (thresholds only): rates combine linearly.
RateVector mix_tree_rates(const Network& net,
                          const std::vector<std::pair<Network, Rational>>& mixture,
                          const FunctionSpec& spec);

// Realizes a mixture by splitting the block into proportional sub-blocks;
// B must be divisible so every weight yields an integral sub-block.
std::map<std::pair<int, int>, std::size_t> simulate_tree_mixture(
    const Network& net, const std::vector<std::pair<Network, Rational>>& mixture,
    const FunctionSpec& spec, int block_len, sweep::Policy policy = {});

struct TwoOptRow {
    SumConvention convention = SumConvention::MaxSum;
    double r_ach = 0.0;
    double r_cut = 0.0;
    double ratio = 1.0;   // 1 when both rates are 0 (constant functions)
    double bound = 0.0;   // 2 * (1 - 1/n)
    bool theorem_applicable = true;  // 2*theta <= total + 1 for the convention
    bool tight = false;
    bool holds = true;  // ratio <= bound + 1e-9 (when applicable)
};

struct TwoOptReport {
    int n = 0;
    TwoOptRow maxsum;    // headline row
    TwoOptRow alphabet;  // literal alphabet-size row
};

// Star mixing versus the cut-set optimum on a complete graph, under both
// size conventions.
TwoOptReport two_opt_check(const Network& net, const FunctionSpec& spec,
                           sweep::Policy policy = {});

}  // namespace symfun
