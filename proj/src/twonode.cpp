#include "symfun/twonode.hpp"

#include <algorithm>
#include <stdexcept>

#include "symfun/errors.hpp"

namespace symfun {

namespace {

Codebook make_codebook(const SeparationPartition& part, int block_len) {
    std::vector<int> reps;
    std::vector<bool> amb;
    for (int c = 0; c < part.size(); ++c) {
        reps.push_back(part.representative(c));
        amb.push_back(part.ambiguous(c));
    }
    return Codebook(std::move(reps), std::move(amb), block_len);
}

std::uint64_t pow_u64_guarded(std::uint64_t base, int exp) {
    std::uint64_t acc = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && acc > UINT64_MAX / base)
            throw resource_error("block space does not fit in 64 bits");
        acc *= base;
    }
    return acc;
}

constexpr std::uint64_t kCacheCap = std::uint64_t{1} << 20;

}  // namespace

TwoNodeEngine::TwoNodeEngine(TwoNodeInstance inst)
    : inst_(std::move(inst)),
      starter_max_(inst_.starter == 1 ? inst_.m1 : inst_.m2),
      responder_max_(inst_.starter == 1 ? inst_.m2 : inst_.m1),
      part_(separate(inst_.spec, starter_max_, responder_max_)),
      codebook_(make_codebook(part_, inst_.B)) {
    if (inst_.m1 < 0 || inst_.m2 < 0) throw std::invalid_argument("two-node: maxima must be >= 0");
    if (inst_.B < 1) throw std::invalid_argument("two-node: block length must be >= 1");
    if (inst_.starter != 1 && inst_.starter != 2)
        throw std::invalid_argument("two-node: starter must be node 1 or node 2");
    if (!inst_.spec.binary_output())
        throw std::domain_error("two-node: protocol replies are single bits; outputs must be 0/1");
    inst_.spec.validate_domain(inst_.m1 + inst_.m2);

    truth_.resize(static_cast<std::size_t>(inst_.m1 + inst_.m2) + 1);
    for (int t = 0; t <= inst_.m1 + inst_.m2; ++t)
        truth_[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(inst_.spec.eval(t));

    for (int c = 0; c < part_.size(); ++c) {
        reps_.push_back(part_.representative(c));
        amb_.push_back(part_.ambiguous(c) ? 1 : 0);
        const auto& cv = part_.class_constant[static_cast<std::size_t>(c)];
        const_val_.push_back(cv ? *cv : -1);
    }

    n1_blocks_ = pow_u64_guarded(static_cast<std::uint64_t>(inst_.m1) + 1, inst_.B);
    n2_blocks_ = pow_u64_guarded(static_cast<std::uint64_t>(inst_.m2) + 1, inst_.B);

    const std::uint64_t starter_blocks = inst_.starter == 1 ? n1_blocks_ : n2_blocks_;
    if (starter_blocks <= kCacheCap) {
        cached_ = true;
        cache_classes_.resize(starter_blocks * static_cast<std::uint64_t>(inst_.B));
        cache_len_.resize(starter_blocks);
        std::vector<int> letters(static_cast<std::size_t>(inst_.B)), classes;
        BitVec bits;
        for (std::uint64_t rank = 0; rank < starter_blocks; ++rank) {
            unrank(rank, starter_max_ + 1, letters);
            classes.resize(letters.size());
            std::vector<int> rep_block(letters.size());
            for (std::size_t t = 0; t < letters.size(); ++t) {
                classes[t] = part_.class_of[static_cast<std::size_t>(letters[t])];
                rep_block[t] = reps_[static_cast<std::size_t>(classes[t])];
            }
            bits = codebook_.encode(rep_block);
            auto dec = codebook_.decode_stream(bits);
            if (dec.block != rep_block || dec.bits_consumed != bits.size())
                throw protocol_error("two-node: codec round trip failed while caching");
            std::copy(classes.begin(), classes.end(),
                      cache_classes_.begin() + static_cast<std::ptrdiff_t>(rank * static_cast<std::uint64_t>(inst_.B)));
            cache_len_[rank] = static_cast<std::uint32_t>(bits.size());
        }
    }
}

void TwoNodeEngine::ensure_sweepable() const {
    if (n2_blocks_ != 0 && n1_blocks_ > guard::max_sweep_space / n2_blocks_)
        throw resource_error("two-node: pair space exceeds the exhaustive guard; lower B");
}

TwoNodeEngine::Workspace TwoNodeEngine::make_workspace() const {
    Workspace ws;
    const auto b = static_cast<std::size_t>(inst_.B);
    ws.starter_block.resize(b);
    ws.responder_block.resize(b);
    ws.classes.resize(b);
    ws.reps.resize(b);
    return ws;
}

void TwoNodeEngine::unrank(std::uint64_t rank, int base, std::vector<int>& out) {
    // Instance 0 is the most significant digit: rank order == lex order.
    for (std::size_t t = out.size(); t-- > 0;) {
        out[t] = static_cast<int>(rank % static_cast<std::uint64_t>(base));
        rank /= static_cast<std::uint64_t>(base);
    }
}

void TwoNodeEngine::unrank_node1(std::uint64_t rank, std::vector<int>& out) const {
    out.resize(static_cast<std::size_t>(inst_.B));
    unrank(rank, inst_.m1 + 1, out);
}

void TwoNodeEngine::unrank_node2(std::uint64_t rank, std::vector<int>& out) const {
    out.resize(static_cast<std::size_t>(inst_.B));
    unrank(rank, inst_.m2 + 1, out);
}

void TwoNodeEngine::validate_block(std::span<const int> block, int max_letter) const {
    if (static_cast<int>(block.size()) != inst_.B)
        throw std::domain_error("two-node: block length mismatch");
    for (int x : block)
        if (x < 0 || x > max_letter)
            throw std::domain_error("two-node: letter " + std::to_string(x) + " out of range");
}

TwoNodeEngine::Outcome TwoNodeEngine::run_letters(std::span<const int> xs, std::span<const int> xr,
                                                  Workspace& ws, bool cached) const {
    // xs: starter letters; xr: responder letters; ws.classes holds the
    // starter's class sequence. When `cached` the codec round trip already
    // ran at cache-build time and the caller fills in up_bits.
    Outcome out;
    int amb_count = 0;
    bool ok = true;
    for (std::size_t t = 0; t < xs.size(); ++t) {
        const int cls = ws.classes[t];
        const int truth = truth_[static_cast<std::size_t>(xs[t] + xr[t])];
        // The responder evaluates through the class representative.
        const int resp = truth_[static_cast<std::size_t>(reps_[static_cast<std::size_t>(cls)] + xr[t])];
        int starter_decoded;
        if (amb_[static_cast<std::size_t>(cls)]) {
            ++amb_count;
            starter_decoded = resp;  // the reply bit
        } else {
            starter_decoded = const_val_[static_cast<std::size_t>(cls)];
        }
        ok = ok && resp == truth && starter_decoded == truth;
    }
    if (!cached) {
        for (std::size_t t = 0; t < xs.size(); ++t)
            ws.reps[t] = reps_[static_cast<std::size_t>(ws.classes[t])];
        ws.bits = BitVec{};
        codebook_.encode_append(std::span<const int>(ws.reps.data(), xs.size()), ws.bits);
        auto dec = codebook_.decode_stream(ws.bits);
        ok = ok && std::equal(dec.block.begin(), dec.block.end(), ws.reps.begin()) &&
             dec.bits_consumed == ws.bits.size();
        out.up_bits = static_cast<std::uint32_t>(ws.bits.size());
    }
    out.down_bits = static_cast<std::uint32_t>(amb_count);
    out.decode_ok = ok;
    return out;
}

TwoNodeEngine::Outcome TwoNodeEngine::run_pair_ranked(std::uint64_t pair_rank, Workspace& ws) const {
    const std::uint64_t x1_rank = pair_rank / n2_blocks_;
    const std::uint64_t x2_rank = pair_rank % n2_blocks_;
    // starter_block/responder_block hold node 1/node 2 here; roles follow.
    unrank_node1(x1_rank, ws.starter_block);
    unrank_node2(x2_rank, ws.responder_block);

    const bool one_starts = inst_.starter == 1;
    const std::span<const int> xs = one_starts ? ws.starter_block : ws.responder_block;
    const std::span<const int> xr = one_starts ? ws.responder_block : ws.starter_block;
    const std::uint64_t starter_rank = one_starts ? x1_rank : x2_rank;

    if (cached_) {
        const auto base = static_cast<std::size_t>(starter_rank * static_cast<std::uint64_t>(inst_.B));
        for (std::size_t t = 0; t < static_cast<std::size_t>(inst_.B); ++t)
            ws.classes[t] = cache_classes_[base + t];
        Outcome out = run_letters(xs, xr, ws, true);
        out.up_bits = cache_len_[starter_rank];
        return out;
    }
    for (std::size_t t = 0; t < static_cast<std::size_t>(inst_.B); ++t)
        ws.classes[t] = part_.class_of[static_cast<std::size_t>(xs[t])];
    return run_letters(xs, xr, ws, false);
}

TwoNodeEngine::Outcome TwoNodeEngine::run_blocks(std::span<const int> x1, std::span<const int> x2,
                                                 Workspace& ws) const {
    validate_block(x1, inst_.m1);
    validate_block(x2, inst_.m2);
    std::span<const int> xs = inst_.starter == 1 ? x1 : x2;
    std::span<const int> xr = inst_.starter == 1 ? x2 : x1;
    ws.classes.resize(xs.size());
    for (std::size_t t = 0; t < xs.size(); ++t)
        ws.classes[t] = part_.class_of[static_cast<std::size_t>(xs[t])];
    return run_letters(xs, xr, ws, false);
}

TwoNodeRun TwoNodeEngine::run(std::span<const int> x1, std::span<const int> x2) const {
    validate_block(x1, inst_.m1);
    validate_block(x2, inst_.m2);
    const int starter_id = inst_.starter;
    const int responder_id = inst_.starter == 1 ? 2 : 1;
    std::span<const int> xs = inst_.starter == 1 ? x1 : x2;
    std::span<const int> xr = inst_.starter == 1 ? x2 : x1;
    const auto B = static_cast<std::size_t>(inst_.B);

    std::vector<int> classes(B), rep_block(B);
    for (std::size_t t = 0; t < B; ++t) {
        classes[t] = part_.class_of[static_cast<std::size_t>(xs[t])];
        rep_block[t] = reps_[static_cast<std::size_t>(classes[t])];
    }

    TwoNodeRun out;
    TranscriptEvent forward;
    forward.sender = starter_id;
    forward.receiver = responder_id;
    forward.bits = codebook_.encode(rep_block);
    forward.phase = Phase::Forward;
    forward.seq = 0;

    // The responder decodes the actual bit stream.
    const auto decoded = codebook_.decode_stream(forward.bits);
    if (decoded.block != rep_block || decoded.bits_consumed != forward.bits.size())
        throw protocol_error("two-node: responder decoded a different block");

    std::vector<int> f_starter(B), f_responder(B);
    TranscriptEvent reply;
    reply.sender = responder_id;
    reply.receiver = starter_id;
    reply.phase = Phase::Reply;
    reply.seq = 1;
    for (std::size_t t = 0; t < B; ++t) {
        const int rep = decoded.block[t];
        const int cls = part_.class_of[static_cast<std::size_t>(rep)];
        const int f = truth_[static_cast<std::size_t>(rep + xr[t])];
        f_responder[t] = f;
        if (amb_[static_cast<std::size_t>(cls)]) reply.bits.push_back(f != 0);
    }
    BitReader replies(reply.bits);
    for (std::size_t t = 0; t < B; ++t) {
        const int cls = classes[t];
        f_starter[t] = amb_[static_cast<std::size_t>(cls)] ? (replies.take1() ? 1 : 0)
                                                           : const_val_[static_cast<std::size_t>(cls)];
    }

    out.transcript.events.push_back(std::move(forward));
    out.transcript.events.push_back(std::move(reply));
    out.f_node1 = inst_.starter == 1 ? std::move(f_starter) : std::move(f_responder);
    out.f_node2 = inst_.starter == 1 ? std::move(f_responder) : std::move(f_starter);
    return out;
}

TwoNodeRun run_two_node(const TwoNodeInstance& inst, std::span<const int> x1,
                        std::span<const int> x2) {
    return TwoNodeEngine(inst).run(x1, x2);
}

TwoNodeRun run_interval(const TwoNodeInstance& inst, std::span<const int> x1,
                        std::span<const int> x2) {
    if (inst.spec.kind != FunctionKind::SumInterval)
        throw std::invalid_argument("run_interval: spec must be a sum-interval function");
    return run_two_node(inst, x1, x2);
}

namespace {

struct MaxAcc {
    std::uint64_t count = 0;
    std::uint64_t errors = 0;
    std::uint32_t max_bits = 0;
    std::uint64_t best_rank = UINT64_MAX;

    void consider(std::uint32_t bits, std::uint64_t rank, bool ok) {
        ++count;
        if (!ok) ++errors;
        if (bits > max_bits || (bits == max_bits && rank < best_rank)) {
            max_bits = bits;
            best_rank = rank;
        }
    }
    void merge(const MaxAcc& o) {
        count += o.count;
        errors += o.errors;
        if (o.max_bits > max_bits || (o.max_bits == max_bits && o.best_rank < best_rank)) {
            max_bits = o.max_bits;
            best_rank = o.best_rank;
        }
    }
};

}  // namespace

WorstCase worst_case_bits(const TwoNodeInstance& inst, sweep::Policy policy) {
    const TwoNodeEngine engine(inst);
    engine.ensure_sweepable();
    const std::uint64_t pairs = engine.pair_count();

    auto acc = sweep::fold<MaxAcc>(pairs, policy, [&engine] {
        return [&engine, ws = engine.make_workspace()](MaxAcc& a, std::uint64_t rank) mutable {
            const auto out = engine.run_pair_ranked(rank, ws);
            a.consider(out.total(), rank, out.decode_ok);
        };
    });
    if (acc.errors != 0)
        throw protocol_error("two-node: decode errors during worst-case sweep");

    WorstCase wc;
    wc.bits = acc.max_bits;
    wc.pairs_checked = acc.count;
    engine.unrank_node1(acc.best_rank / engine.node2_block_count(), wc.x1);
    engine.unrank_node2(acc.best_rank % engine.node2_block_count(), wc.x2);
    return wc;
}

bool verify_transcript(const TwoNodeInstance& inst, std::span<const int> x1,
                       std::span<const int> x2, const Transcript& transcript) {
    return run_two_node(inst, x1, x2).transcript == transcript;
}

}  // namespace symfun
