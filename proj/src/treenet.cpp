#include "symfun/treenet.hpp"

#include <algorithm>
#include <stdexcept>

#include "symfun/errors.hpp"

namespace symfun {

namespace {

std::vector<std::vector<int>> adjacency(const Network& net) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(net.node_count()));
    for (const auto& [u, v] : net.edges) {
        adj[static_cast<std::size_t>(net.index_of(u))].push_back(net.index_of(v));
        adj[static_cast<std::size_t>(net.index_of(v))].push_back(net.index_of(u));
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

int find_edge_index(const Network& net, std::pair<int, int> edge) {
    const auto e = std::minmax(edge.first, edge.second);
    const auto it = std::lower_bound(net.edges.begin(), net.edges.end(),
                                     std::pair<int, int>(e.first, e.second));
    if (it == net.edges.end() || *it != std::pair<int, int>(e.first, e.second))
        throw std::invalid_argument("tree: unknown edge (" + std::to_string(edge.first) + "," +
                                    std::to_string(edge.second) + ")");
    return static_cast<int>(it - net.edges.begin());
}

}  // namespace

std::pair<std::vector<int>, std::vector<int>> edge_components(const Network& tree,
                                                              std::pair<int, int> edge) {
    tree.validate();
    if (!tree.is_tree()) throw std::invalid_argument("edge_components: network is not a tree");
    find_edge_index(tree, edge);

    // Collect the side containing edge.first without crossing the edge.
    const auto adj = adjacency(tree);
    const int a = tree.index_of(edge.first);
    const int b = tree.index_of(edge.second);
    std::vector<char> side(static_cast<std::size_t>(tree.node_count()), 0);
    std::vector<int> stack{a};
    side[static_cast<std::size_t>(a)] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if ((v == a && w == b) || (v == b && w == a)) continue;
            if (!side[static_cast<std::size_t>(w)]) {
                side[static_cast<std::size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }

    std::vector<int> first_ids, second_ids;
    long long first_sum = 0, second_sum = 0;
    for (int i = 0; i < tree.node_count(); ++i) {
        if (side[static_cast<std::size_t>(i)]) {
            first_ids.push_back(tree.ids[static_cast<std::size_t>(i)]);
            first_sum += tree.alphabet[static_cast<std::size_t>(i)] - 1;
        } else {
            second_ids.push_back(tree.ids[static_cast<std::size_t>(i)]);
            second_sum += tree.alphabet[static_cast<std::size_t>(i)] - 1;
        }
    }
    const bool keep_first =
        first_sum < second_sum ||
        (first_sum == second_sum && first_ids.front() < second_ids.front());
    if (keep_first) return {std::move(first_ids), std::move(second_ids)};
    return {std::move(second_ids), std::move(first_ids)};
}

BoundReport edge_complexity(const Network& tree, const FunctionSpec& spec,
                            std::pair<int, int> edge) {
    if (spec.kind != FunctionKind::SumThreshold)
        throw std::invalid_argument("edge_complexity: bounds are stated for sum-threshold only");
    const auto [side, rest] = edge_components(tree, edge);
    long long side_sum = 0;
    for (int id : side) side_sum += tree.alphabet_of(id) - 1;
    const long long total = tree.max_sum();
    return threshold_complexity(spec.theta, static_cast<int>(side_sum),
                                static_cast<int>(total - side_sum));
}

TreeEngine::TreeEngine(Network tree, FunctionSpec spec, int block_len, std::optional<int> root_id)
    : net_(std::move(tree)), spec_(std::move(spec)), block_len_(block_len) {
    net_.validate();
    if (!net_.is_tree()) throw std::invalid_argument("tree protocol: network is not a tree");
    if (block_len_ < 1) throw std::invalid_argument("tree protocol: block length must be >= 1");
    if (!spec_.binary_output())
        throw std::domain_error("tree protocol: replies are single bits; outputs must be 0/1");
    total_sum_ = net_.max_sum();
    spec_.validate_domain(static_cast<int>(total_sum_));

    const int n = net_.node_count();
    if (root_id)
        root_ = net_.index_of(*root_id);
    else if (net_.root)
        root_ = net_.index_of(*net_.root);
    else
        root_ = 0;

    const auto adj = adjacency(net_);
    parent_.assign(static_cast<std::size_t>(n), -1);
    children_.assign(static_cast<std::size_t>(n), {});
    bfs_.clear();
    bfs_.push_back(root_);
    for (std::size_t head = 0; head < bfs_.size(); ++head) {
        const int v = bfs_[head];
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (w == parent_[static_cast<std::size_t>(v)]) continue;
            parent_[static_cast<std::size_t>(w)] = v;
            children_[static_cast<std::size_t>(v)].push_back(w);
            bfs_.push_back(w);
        }
    }

    sub_max_.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t i = bfs_.size(); i-- > 0;) {
        const int v = bfs_[i];
        long long s = net_.alphabet[static_cast<std::size_t>(v)] - 1;
        for (int c : children_[static_cast<std::size_t>(v)]) s += sub_max_[static_cast<std::size_t>(c)];
        sub_max_[static_cast<std::size_t>(v)] = s;
    }

    truth_.resize(static_cast<std::size_t>(total_sum_) + 1);
    for (long long t = 0; t <= total_sum_; ++t)
        truth_[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(spec_.eval(static_cast<int>(t)));

    edge_of_node_.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        if (v == root_) continue;
        auto info = std::make_unique<EdgeInfo>();
        info->edge_idx = find_edge_index(
            net_, {net_.ids[static_cast<std::size_t>(v)],
                   net_.ids[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])]});
        const auto own = static_cast<int>(sub_max_[static_cast<std::size_t>(v)]);
        info->part = separate(spec_, own, static_cast<int>(total_sum_) - own);
        std::vector<bool> amb_flags;
        for (int c = 0; c < info->part.size(); ++c) {
            info->reps.push_back(info->part.representative(c));
            const bool amb = info->part.ambiguous(c);
            info->amb.push_back(amb ? 1 : 0);
            amb_flags.push_back(amb);
            const auto& cv = info->part.class_constant[static_cast<std::size_t>(c)];
            info->const_val.push_back(cv ? *cv : -1);
        }
        info->codebook = std::make_unique<Codebook>(info->reps, amb_flags, block_len_);
        edge_of_node_[static_cast<std::size_t>(v)] = std::move(info);
    }

    for (int v = 0; v < n; ++v) {
        const auto base = static_cast<std::uint64_t>(net_.alphabet[static_cast<std::size_t>(v)]);
        for (int t = 0; t < block_len_; ++t) {
            if (assignments_ > UINT64_MAX / base)
                throw resource_error("tree protocol: assignment space does not fit in 64 bits");
            assignments_ *= base;
        }
    }
}

void TreeEngine::ensure_sweepable() const {
    if (assignments_ > guard::max_sweep_space)
        throw resource_error("tree protocol: assignment space exceeds the exhaustive guard; lower B");
}

long long TreeEngine::edge_subtree_sum(int edge_idx) const {
    for (int v = 0; v < net_.node_count(); ++v)
        if (edge_of_node_[static_cast<std::size_t>(v)] &&
            edge_of_node_[static_cast<std::size_t>(v)]->edge_idx == edge_idx)
            return sub_max_[static_cast<std::size_t>(v)];
    throw std::invalid_argument("tree protocol: bad edge index");
}

const Codebook& TreeEngine::edge_codebook(int edge_idx) const {
    for (int v = 0; v < net_.node_count(); ++v)
        if (edge_of_node_[static_cast<std::size_t>(v)] &&
            edge_of_node_[static_cast<std::size_t>(v)]->edge_idx == edge_idx)
            return *edge_of_node_[static_cast<std::size_t>(v)]->codebook;
    throw std::invalid_argument("tree protocol: bad edge index");
}

int TreeEngine::edge_budget(int edge_idx) const { return edge_codebook(edge_idx).total_budget(); }

TreeEngine::Workspace TreeEngine::make_workspace() const {
    Workspace ws;
    const auto nb = static_cast<std::size_t>(net_.node_count()) * static_cast<std::size_t>(block_len_);
    ws.letters.resize(nb);
    ws.repval.resize(nb);
    ws.cls.resize(nb);
    ws.decoded.resize(nb);
    ws.reps.resize(static_cast<std::size_t>(block_len_));
    return ws;
}

void TreeEngine::unrank_assignment(std::uint64_t rank, std::vector<std::vector<int>>& blocks) const {
    const int n = net_.node_count();
    blocks.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(block_len_)));
    // Node 0 instance 0 is the most significant digit.
    for (int v = n - 1; v >= 0; --v) {
        const auto base = static_cast<std::uint64_t>(net_.alphabet[static_cast<std::size_t>(v)]);
        for (int t = block_len_ - 1; t >= 0; --t) {
            blocks[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)] =
                static_cast<int>(rank % base);
            rank /= base;
        }
    }
}

bool TreeEngine::run_letters(Workspace& ws, std::uint32_t* up, std::uint32_t* down) const {
    const int B = block_len_;
    const auto at = [B](int node, int t) {
        return static_cast<std::size_t>(node) * static_cast<std::size_t>(B) + static_cast<std::size_t>(t);
    };

    // Convergecast: children before parents.
    for (std::size_t i = bfs_.size(); i-- > 0;) {
        const int v = bfs_[i];
        const auto& info = edge_of_node_[static_cast<std::size_t>(v)];
        if (!info) continue;  // root
        for (int t = 0; t < B; ++t) {
            int sum = ws.letters[at(v, t)];
            for (int c : children_[static_cast<std::size_t>(v)]) sum += ws.repval[at(c, t)];
            const int cls = info->part.class_of[static_cast<std::size_t>(sum)];
            ws.cls[at(v, t)] = cls;
            ws.repval[at(v, t)] = info->reps[static_cast<std::size_t>(cls)];
        }
    }

    bool ok = true;

    // Per-edge codec: encode the representative block, decode it back.
    for (int v = 0; v < net_.node_count(); ++v) {
        const auto& info = edge_of_node_[static_cast<std::size_t>(v)];
        if (!info) continue;
        int amb_count = 0;
        for (int t = 0; t < B; ++t) {
            ws.reps[static_cast<std::size_t>(t)] = ws.repval[at(v, t)];
            if (info->amb[static_cast<std::size_t>(ws.cls[at(v, t)])]) ++amb_count;
        }
        ws.bits = BitVec{};
        info->codebook->encode_append(ws.reps, ws.bits);
        const auto dec = info->codebook->decode_stream(ws.bits);
        ok = ok && dec.block == ws.reps && dec.bits_consumed == ws.bits.size();
        up[info->edge_idx] = static_cast<std::uint32_t>(ws.bits.size());
        down[info->edge_idx] = static_cast<std::uint32_t>(amb_count);
    }

    // Root evaluates through the children's representatives.
    for (int t = 0; t < B; ++t) {
        int sum = ws.letters[at(root_, t)];
        for (int c : children_[static_cast<std::size_t>(root_)]) sum += ws.repval[at(c, t)];
        ws.decoded[at(root_, t)] = truth_[static_cast<std::size_t>(sum)];
    }

    // Broadcast: each node resolves from its parent's block, constants first.
    for (std::size_t i = 1; i < bfs_.size(); ++i) {
        const int v = bfs_[i];
        const int p = parent_[static_cast<std::size_t>(v)];
        const auto& info = edge_of_node_[static_cast<std::size_t>(v)];
        for (int t = 0; t < B; ++t) {
            const int cls = ws.cls[at(v, t)];
            ws.decoded[at(v, t)] = info->amb[static_cast<std::size_t>(cls)]
                                       ? ws.decoded[at(p, t)]
                                       : static_cast<std::uint8_t>(info->const_val[static_cast<std::size_t>(cls)]);
        }
    }

    // Zero-error check against the directly evaluated truth.
    for (int t = 0; t < B; ++t) {
        int total = 0;
        for (int v = 0; v < net_.node_count(); ++v) total += ws.letters[at(v, t)];
        const std::uint8_t truth = truth_[static_cast<std::size_t>(total)];
        for (int v = 0; v < net_.node_count(); ++v) ok = ok && ws.decoded[at(v, t)] == truth;
    }
    return ok;
}

bool TreeEngine::run_prefilled(Workspace& ws, std::uint32_t* up, std::uint32_t* down) const {
    return run_letters(ws, up, down);
}

bool TreeEngine::run_ranked(std::uint64_t rank, Workspace& ws, std::uint32_t* up,
                            std::uint32_t* down) const {
    const int n = net_.node_count();
    std::uint64_t r = rank;
    for (int v = n - 1; v >= 0; --v) {
        const auto base = static_cast<std::uint64_t>(net_.alphabet[static_cast<std::size_t>(v)]);
        for (int t = block_len_ - 1; t >= 0; --t) {
            ws.letters[static_cast<std::size_t>(v) * static_cast<std::size_t>(block_len_) +
                       static_cast<std::size_t>(t)] = static_cast<int>(r % base);
            r /= base;
        }
    }
    return run_letters(ws, up, down);
}

TreeRun TreeEngine::run(const std::vector<std::vector<int>>& blocks) const {
    const int n = net_.node_count();
    const int B = block_len_;
    if (static_cast<int>(blocks.size()) != n)
        throw std::domain_error("tree protocol: one block per node required");
    for (int v = 0; v < n; ++v) {
        if (static_cast<int>(blocks[static_cast<std::size_t>(v)].size()) != B)
            throw std::domain_error("tree protocol: block length mismatch");
        for (int x : blocks[static_cast<std::size_t>(v)])
            if (x < 0 || x >= net_.alphabet[static_cast<std::size_t>(v)])
                throw std::domain_error("tree protocol: letter out of range");
    }

    const auto at = [B](int node, int t) {
        return static_cast<std::size_t>(node) * static_cast<std::size_t>(B) + static_cast<std::size_t>(t);
    };
    Workspace ws = make_workspace();
    for (int v = 0; v < n; ++v)
        for (int t = 0; t < B; ++t) ws.letters[at(v, t)] = blocks[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)];

    TreeRun out;
    out.per_edge.reserve(net_.edges.size());
    for (const auto& e : net_.edges) out.per_edge.emplace_back(e, Transcript{});

    std::uint32_t seq = 0;

    // Convergecast with an explicit readiness machine: a node may transmit
    // only after every child's codeword arrived.
    std::vector<char> sent(static_cast<std::size_t>(n), 0);
    std::vector<BitVec> upward(static_cast<std::size_t>(n));
    int pending = n - 1;
    while (pending > 0) {
        bool progressed = false;
        for (int v = 0; v < n; ++v) {
            if (v == root_ || sent[static_cast<std::size_t>(v)]) continue;
            bool ready = true;
            for (int c : children_[static_cast<std::size_t>(v)]) ready = ready && sent[static_cast<std::size_t>(c)];
            if (!ready) continue;

            const auto& info = edge_of_node_[static_cast<std::size_t>(v)];
            for (int c : children_[static_cast<std::size_t>(v)])
                if (!sent[static_cast<std::size_t>(c)])
                    throw protocol_error("tree protocol: transmission before children reported");
            for (int t = 0; t < B; ++t) {
                int sum = ws.letters[at(v, t)];
                for (int c : children_[static_cast<std::size_t>(v)]) sum += ws.repval[at(c, t)];
                const int cls = info->part.class_of[static_cast<std::size_t>(sum)];
                ws.cls[at(v, t)] = cls;
                ws.repval[at(v, t)] = info->reps[static_cast<std::size_t>(cls)];
                ws.reps[static_cast<std::size_t>(t)] = ws.repval[at(v, t)];
            }
            TranscriptEvent ev;
            ev.sender = net_.ids[static_cast<std::size_t>(v)];
            ev.receiver = net_.ids[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
            ev.phase = Phase::Forward;
            ev.seq = seq++;
            info->codebook->encode_append(ws.reps, ev.bits);

            // Parent decodes the stream it just received.
            const auto dec = info->codebook->decode_stream(ev.bits);
            if (dec.block != ws.reps || dec.bits_consumed != ev.bits.size())
                throw protocol_error("tree protocol: parent decoded a different block");

            out.per_edge[static_cast<std::size_t>(info->edge_idx)].second.events.push_back(std::move(ev));
            sent[static_cast<std::size_t>(v)] = 1;
            --pending;
            progressed = true;
        }
        if (!progressed) throw protocol_error("tree protocol: convergecast stalled");
    }

    // Root computes the function block.
    std::vector<char> resolved(static_cast<std::size_t>(n), 0);
    for (int t = 0; t < B; ++t) {
        int sum = ws.letters[at(root_, t)];
        for (int c : children_[static_cast<std::size_t>(root_)]) sum += ws.repval[at(c, t)];
        ws.decoded[at(root_, t)] = truth_[static_cast<std::size_t>(sum)];
    }
    resolved[static_cast<std::size_t>(root_)] = 1;

    // Broadcast: a node replies to a child only once its own edge resolved.
    for (int v : bfs_) {
        if (!resolved[static_cast<std::size_t>(v)])
            throw protocol_error("tree protocol: reply before resolution");
        for (int c : children_[static_cast<std::size_t>(v)]) {
            const auto& info = edge_of_node_[static_cast<std::size_t>(c)];
            TranscriptEvent ev;
            ev.sender = net_.ids[static_cast<std::size_t>(v)];
            ev.receiver = net_.ids[static_cast<std::size_t>(c)];
            ev.phase = Phase::Reply;
            ev.seq = seq++;
            for (int t = 0; t < B; ++t) {
                const int cls = ws.cls[at(c, t)];
                if (info->amb[static_cast<std::size_t>(cls)])
                    ev.bits.push_back(ws.decoded[at(v, t)] != 0);
            }
            BitReader replies(ev.bits);
            for (int t = 0; t < B; ++t) {
                const int cls = ws.cls[at(c, t)];
                ws.decoded[at(c, t)] =
                    info->amb[static_cast<std::size_t>(cls)]
                        ? static_cast<std::uint8_t>(replies.take1() ? 1 : 0)
                        : static_cast<std::uint8_t>(info->const_val[static_cast<std::size_t>(cls)]);
            }
            resolved[static_cast<std::size_t>(c)] = 1;
            out.per_edge[static_cast<std::size_t>(info->edge_idx)].second.events.push_back(std::move(ev));
        }
    }

    out.f_blocks.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(B)));
    for (int v = 0; v < n; ++v)
        for (int t = 0; t < B; ++t)
            out.f_blocks[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)] = ws.decoded[at(v, t)];
    return out;
}

TreeRun run_tree_protocol(const Network& tree, const FunctionSpec& spec, int block_len,
                          const std::vector<std::vector<int>>& blocks,
                          std::optional<int> root_id) {
    return TreeEngine(tree, spec, block_len, root_id).run(blocks);
}

namespace {

struct EdgeMaxAcc {
    std::uint64_t count = 0;
    std::uint64_t errors = 0;
    // One slot per edge: worst total, witness rank, split at the witness.
    std::vector<std::uint32_t> max_total;
    std::vector<std::uint64_t> best_rank;
    std::vector<std::uint32_t> up_at_best, down_at_best;

    void init(std::size_t edges) {
        if (!max_total.empty()) return;
        max_total.assign(edges, 0);
        best_rank.assign(edges, UINT64_MAX);
        up_at_best.assign(edges, 0);
        down_at_best.assign(edges, 0);
    }
    void consider(std::size_t e, std::uint32_t up, std::uint32_t down, std::uint64_t rank) {
        const std::uint32_t total = up + down;
        if (total > max_total[e] || (total == max_total[e] && rank < best_rank[e])) {
            max_total[e] = total;
            best_rank[e] = rank;
            up_at_best[e] = up;
            down_at_best[e] = down;
        }
    }
    void merge(const EdgeMaxAcc& o) {
        count += o.count;
        errors += o.errors;
        if (o.max_total.empty()) return;
        init(o.max_total.size());
        for (std::size_t e = 0; e < max_total.size(); ++e) {
            if (o.max_total[e] > max_total[e] ||
                (o.max_total[e] == max_total[e] && o.best_rank[e] < best_rank[e])) {
                max_total[e] = o.max_total[e];
                best_rank[e] = o.best_rank[e];
                up_at_best[e] = o.up_at_best[e];
                down_at_best[e] = o.down_at_best[e];
            }
        }
    }
};

}  // namespace

std::map<std::pair<int, int>, EdgeAccount> worst_case_edge_bits(const Network& tree,
                                                                const FunctionSpec& spec,
                                                                int block_len, sweep::Policy policy,
                                                                std::optional<int> root_id) {
    const TreeEngine engine(tree, spec, block_len, root_id);
    engine.ensure_sweepable();
    const auto edges = static_cast<std::size_t>(engine.edge_count());

    auto acc = sweep::fold<EdgeMaxAcc>(engine.assignment_count(), policy, [&engine, edges] {
        return [&engine, edges, ws = engine.make_workspace(),
                up = std::vector<std::uint32_t>(edges),
                down = std::vector<std::uint32_t>(edges)](EdgeMaxAcc& a, std::uint64_t rank) mutable {
            a.init(edges);
            ++a.count;
            if (!engine.run_ranked(rank, ws, up.data(), down.data())) ++a.errors;
            for (std::size_t e = 0; e < edges; ++e) a.consider(e, up[e], down[e], rank);
        };
    });
    if (acc.errors != 0)
        throw protocol_error("tree protocol: decode errors during worst-case sweep");

    std::map<std::pair<int, int>, EdgeAccount> result;
    for (std::size_t e = 0; e < edges; ++e) {
        EdgeAccount account = edge_bound_template(engine, static_cast<int>(e));
        account.total_bits = acc.max_total[e];
        account.up_bits = acc.up_at_best[e];
        account.down_bits = acc.down_at_best[e];
        result.emplace(account.edge, account);
    }
    return result;
}

EdgeAccount edge_bound_template(const TreeEngine& engine, int edge_idx) {
    EdgeAccount account;
    account.edge = engine.network().edges[static_cast<std::size_t>(edge_idx)];
    const auto& spec = engine.spec();
    if (spec.kind == FunctionKind::SumThreshold) {
        const long long total = engine.network().max_sum();
        const auto s_e = engine.edge_subtree_sum(edge_idx);
        const auto rep = threshold_complexity(spec.theta, static_cast<int>(s_e),
                                              static_cast<int>(total - s_e));
        account.fooling_size = rep.fooling_size;
        account.bound_lower = engine.block_length() * rep.lower_bits_per_instance;
        account.bound_upper =
            rep.case_tag == CaseTag::constant
                ? 0
                : ceil_log2_pow_wide(account.fooling_size, engine.block_length());
    } else {
        account.bound_lower = 0;
        account.bound_upper = engine.edge_budget(edge_idx);
    }
    return account;
}

}  // namespace symfun
