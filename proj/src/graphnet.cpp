#include "symfun/graphnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "symfun/bounds.hpp"
#include "symfun/errors.hpp"

namespace symfun {

namespace {

constexpr double kTol = 1e-9;

long long node_weight(const Network& net, int index, SumConvention conv) {
    const int l = net.alphabet[static_cast<std::size_t>(index)];
    return conv == SumConvention::AlphabetSize ? l : l - 1;
}

long long total_weight(const Network& net, SumConvention conv) {
    return conv == SumConvention::AlphabetSize ? net.alphabet_total() : net.max_sum();
}

void require_threshold(const FunctionSpec& spec, const char* where) {
    if (spec.kind != FunctionKind::SumThreshold)
        throw std::invalid_argument(std::string(where) + ": sum-threshold functions only");
}

bool is_constant_threshold(const Network& net, const FunctionSpec& spec) {
    return spec.theta == 0 || spec.theta > net.max_sum();
}

double cut_value(long long theta, long long m_f, long long total_w) {
    const long long z = std::min({2 * theta + 1, 2 * m_f + 2, 2 * (total_w - theta + 1) + 1});
    return std::log2(static_cast<double>(z));
}

}  // namespace

std::string to_string(SumConvention conv) {
    return conv == SumConvention::MaxSum ? "max-sum" : "alphabet-size";
}

double RateVector::max_rate() const {
    double m = 0.0;
    for (double r : rate) m = std::max(m, r);
    return m;
}

double cutset_bound(const Network& net, const FunctionSpec& spec,
                    const std::vector<int>& side_ids, SumConvention conv) {
    require_threshold(spec, "cutset_bound");
    net.validate();
    if (side_ids.empty() || static_cast<int>(side_ids.size()) >= net.node_count())
        throw std::invalid_argument("cutset_bound: side must be a proper nonempty subset");
    std::set<int> side(side_ids.begin(), side_ids.end());
    if (side.size() != side_ids.size()) throw std::invalid_argument("cutset_bound: duplicate ids");

    if (is_constant_threshold(net, spec)) return 0.0;

    long long side_w = 0;
    for (int id : side) side_w += node_weight(net, net.index_of(id), conv);
    const long long total_w = total_weight(net, conv);
    const long long m_f = std::min(side_w, total_w - side_w);
    return cut_value(spec.theta, m_f, total_w);
}

namespace {

struct CutAcc {
    double best_rate = -1.0;
    double bound = 0.0;
    int crossing = 0;
    std::uint64_t best_mask = UINT64_MAX;
    std::uint64_t count = 0;

    void consider(double rate, double b, int cross, std::uint64_t mask) {
        ++count;
        if (rate > best_rate + kTol || (rate > best_rate - kTol && mask < best_mask)) {
            best_rate = rate;
            bound = b;
            crossing = cross;
            best_mask = mask;
        }
    }
    void merge(const CutAcc& o) {
        count += o.count;
        if (o.best_rate > best_rate + kTol ||
            (o.best_rate > best_rate - kTol && o.best_mask < best_mask)) {
            best_rate = o.best_rate;
            bound = o.bound;
            crossing = o.crossing;
            best_mask = o.best_mask;
        }
    }
};

}  // namespace

CutRate min_symmetric_cut_rate(const Network& net, const FunctionSpec& spec, SumConvention conv,
                               sweep::Policy policy) {
    require_threshold(spec, "min_symmetric_cut_rate");
    net.validate();
    const int n = net.node_count();
    if (n > guard::max_cut_nodes)
        throw resource_error("min_symmetric_cut_rate: cut enumeration is limited to 16 nodes");
    if (n < 2) throw std::invalid_argument("min_symmetric_cut_rate: need at least two nodes");

    const bool constant = is_constant_threshold(net, spec);
    const long long total_w = total_weight(net, conv);
    std::vector<long long> weights(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) weights[static_cast<std::size_t>(i)] = node_weight(net, i, conv);
    std::vector<std::pair<int, int>> edge_idx;
    for (const auto& [u, v] : net.edges) edge_idx.emplace_back(net.index_of(u), net.index_of(v));

    // Node 0 pinned to the side encoded by the mask; masks walk the other
    // n-1 nodes (excluding the full set), so each bipartition appears once.
    const std::uint64_t cut_count = (std::uint64_t{1} << (n - 1)) - 1;
    auto acc = sweep::fold<CutAcc>(cut_count, policy, [&] {
        return [&, n, constant, total_w](CutAcc& a, std::uint64_t m) {
            const std::uint64_t mask = (m << 1) | 1;
            long long side_w = 0;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1) side_w += weights[static_cast<std::size_t>(i)];
            int crossing = 0;
            for (const auto& [a_idx, b_idx] : edge_idx)
                if (((mask >> a_idx) & 1) != ((mask >> b_idx) & 1)) ++crossing;
            const double bound =
                constant ? 0.0
                         : cut_value(spec.theta, std::min(side_w, total_w - side_w), total_w);
            a.consider(bound / crossing, bound, crossing, mask);
        };
    });

    CutRate out;
    out.rate = std::max(acc.best_rate, 0.0);
    out.bound = acc.bound;
    out.crossing = acc.crossing;
    out.cuts_checked = acc.count;
    for (int i = 0; i < n; ++i)
        if ((acc.best_mask >> i) & 1) out.side_ids.push_back(net.ids[static_cast<std::size_t>(i)]);
    return out;
}

RateVector star_mix_rate(const Network& net, const FunctionSpec& spec, SumConvention conv) {
    require_threshold(spec, "star_mix_rate");
    net.validate();
    if (!net.is_complete()) throw std::invalid_argument("star_mix_rate: network must be complete");
    const int n = net.node_count();

    RateVector rv;
    rv.edges = net.edges;
    rv.rate.assign(net.edges.size(), 0.0);
    if (is_constant_threshold(net, spec)) return rv;

    std::vector<double> c(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double w = static_cast<double>(node_weight(net, i, conv));
        c[static_cast<std::size_t>(i)] =
            std::min(std::log2(2.0 * spec.theta + 1.0), std::log2(2.0 * w + 2.0));
    }
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
        const int i = net.index_of(net.edges[e].first);
        const int j = net.index_of(net.edges[e].second);
        rv.rate[e] = (c[static_cast<std::size_t>(i)] + c[static_cast<std::size_t>(j)]) / n;
    }
    return rv;
}

namespace {

void require_spanning(const Network& net, const Network& tree) {
    if (tree.ids != net.ids || tree.alphabet != net.alphabet)
        throw std::invalid_argument("spanning tree must cover exactly the network's nodes");
    if (!tree.is_tree()) throw std::invalid_argument("subtree scheme: not a tree");
    for (const auto& [u, v] : tree.edges)
        if (!net.has_edge(u, v))
            throw std::invalid_argument("subtree scheme: tree edge (" + std::to_string(u) + "," +
                                        std::to_string(v) + ") is not a network edge");
}

}  // namespace

std::map<std::pair<int, int>, EdgeAccount> spanning_tree_scheme(const Network& net,
                                                                const Network& tree,
                                                                const FunctionSpec& spec,
                                                                int block_len,
                                                                sweep::Policy policy) {
    net.validate();
    require_spanning(net, tree);
    auto tree_accounts = worst_case_edge_bits(tree, spec, block_len, policy);

    std::map<std::pair<int, int>, EdgeAccount> result;
    for (const auto& e : net.edges) {
        const auto it = tree_accounts.find(e);
        if (it != tree_accounts.end()) {
            result.emplace(e, it->second);
        } else {
            EdgeAccount idle;
            idle.edge = e;
            result.emplace(e, idle);
        }
    }
    return result;
}

namespace {

void validate_mixture(const std::vector<std::pair<Network, Rational>>& mixture) {
    if (mixture.empty()) throw std::invalid_argument("mixture: no trees");
    long long num = 0, den = 1;
    for (const auto& [tree, w] : mixture) {
        (void)tree;
        if (w.den <= 0 || w.num < 0) throw std::invalid_argument("mixture: weights must be >= 0");
        num = num * w.den + w.num * den;
        den *= w.den;
        const long long g = std::gcd(num, den);
        num /= g;
        den /= g;
    }
    if (num != den) throw std::invalid_argument("mixture: weights must sum to 1");
}

}  // namespace

RateVector mix_tree_rates(const Network& net,
                          const std::vector<std::pair<Network, Rational>>& mixture,
                          const FunctionSpec& spec) {
    require_threshold(spec, "mix_tree_rates");
    net.validate();
    validate_mixture(mixture);

    RateVector rv;
    rv.edges = net.edges;
    rv.rate.assign(net.edges.size(), 0.0);
    for (const auto& [tree, w] : mixture) {
        require_spanning(net, tree);
        const double weight = static_cast<double>(w.num) / static_cast<double>(w.den);
        if (weight == 0.0) continue;
        for (const auto& e : tree.edges) {
            const auto rep = edge_complexity(tree, spec, e);
            const auto it = std::lower_bound(net.edges.begin(), net.edges.end(), e);
            rv.rate[static_cast<std::size_t>(it - net.edges.begin())] +=
                weight * rep.lower_bits_per_instance;
        }
    }
    return rv;
}

std::map<std::pair<int, int>, std::size_t> simulate_tree_mixture(
    const Network& net, const std::vector<std::pair<Network, Rational>>& mixture,
    const FunctionSpec& spec, int block_len, sweep::Policy policy) {
    net.validate();
    validate_mixture(mixture);

    std::map<std::pair<int, int>, std::size_t> totals;
    for (const auto& e : net.edges) totals[e] = 0;
    for (const auto& [tree, w] : mixture) {
        require_spanning(net, tree);
        if (w.num == 0) continue;
        const long long scaled = static_cast<long long>(block_len) * w.num;
        if (scaled % w.den != 0)
            throw std::invalid_argument(
                "mixture: block length must split into integral sub-blocks");
        const int sub_block = static_cast<int>(scaled / w.den);
        auto accounts = worst_case_edge_bits(tree, spec, sub_block, policy);
        for (const auto& [edge, account] : accounts) totals[edge] += account.total_bits;
    }
    return totals;
}

namespace {

TwoOptRow two_opt_row(const Network& net, const FunctionSpec& spec, SumConvention conv,
                      sweep::Policy policy) {
    TwoOptRow row;
    row.convention = conv;
    const int n = net.node_count();
    row.bound = 2.0 * (1.0 - 1.0 / n);
    if (is_constant_threshold(net, spec)) {
        row.ratio = 1.0;
        row.tight = std::abs(row.ratio - row.bound) <= kTol;
        row.holds = row.ratio <= row.bound + kTol;
        return row;
    }
    row.r_ach = star_mix_rate(net, spec, conv).max_rate();
    row.r_cut = min_symmetric_cut_rate(net, spec, conv, policy).rate;
    row.ratio = (row.r_ach == 0.0 && row.r_cut == 0.0) ? 1.0 : row.r_ach / row.r_cut;
    // The star-mix expression drops the high-threshold term, which is valid
    // only on the low half of the threshold range.
    row.theorem_applicable = 2LL * spec.theta <= total_weight(net, conv) + 1;
    row.holds = !row.theorem_applicable || row.ratio <= row.bound + kTol;
    row.tight = row.theorem_applicable && std::abs(row.ratio - row.bound) <= kTol;
    return row;
}

}  // namespace

TwoOptReport two_opt_check(const Network& net, const FunctionSpec& spec, sweep::Policy policy) {
    require_threshold(spec, "two_opt_check");
    net.validate();
    if (!net.is_complete()) throw std::invalid_argument("two_opt_check: network must be complete");

    TwoOptReport rep;
    rep.n = net.node_count();
    rep.maxsum = two_opt_row(net, spec, SumConvention::MaxSum, policy);
    rep.alphabet = two_opt_row(net, spec, SumConvention::AlphabetSize, policy);
    return rep;
}

}  // namespace symfun
