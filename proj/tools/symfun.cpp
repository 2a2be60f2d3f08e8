// symfun: bound tables, protocol simulation sweeps and graph experiments
// for zero-error block computation of sum-dependent functions.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "symfun/bounds.hpp"
#include "symfun/errors.hpp"
#include "symfun/graphnet.hpp"
#include "symfun/harness.hpp"
#include "symfun/network.hpp"
#include "symfun/prefixcode.hpp"
#include "symfun/treenet.hpp"
#include "symfun/twonode.hpp"

namespace {

using namespace symfun;

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("SYMFUN_LOG");
        return env ? std::atoi(env) : 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[symfun] " << msg << "\n";
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Data goes to stdout unless --out was given; logs always go to stderr.
void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file " + out_path);
    out << text;
}

struct SpecFlags {
    int theta = -1;
    std::vector<int> interval;
    std::string general;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--threshold", theta, "Sum-threshold function with this threshold");
        cmd.add_option("--interval", interval, "Sum-interval function bounds a b")->expected(2);
        cmd.add_option("--general", general,
                       "General sum-dependent function: JSON output table, e.g. [0,1,0,1]");
    }

    FunctionSpec resolve() const {
        const int given = (theta >= 0 ? 1 : 0) + (interval.empty() ? 0 : 1) +
                          (general.empty() ? 0 : 1);
        if (given != 1)
            throw CLI::ValidationError(
                "exactly one of --threshold, --interval, --general is required");
        if (theta >= 0) return FunctionSpec::threshold(theta);
        if (!interval.empty()) return FunctionSpec::interval(interval[0], interval[1]);
        return FunctionSpec::general(nlohmann::json::parse(general).get<std::vector<int>>());
    }
};

nlohmann::ordered_json bound_row_json(const BoundReport& rep) {
    nlohmann::ordered_json j;
    j["fooling_size"] = rep.fooling_size;
    j["case"] = to_string(rep.case_tag);
    j["lower_rate"] = rep.lower_bits_per_instance;
    j["upper_rate"] = rep.upper_bits_per_instance;
    j["regime_valid"] = rep.regime_valid;
    return j;
}

int cmd_bounds(const SpecFlags& spec_flags, const std::string& tree_path, int m1, int m2,
               const std::string& format, const std::string& out_path) {
    const auto spec = spec_flags.resolve();
    std::ostringstream os;

    if (!tree_path.empty()) {
        const auto tree = Network::load(tree_path);
        if (format == "json") {
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (const auto& edge : tree.edges) {
                auto j = bound_row_json(edge_complexity(tree, spec, edge));
                j["edge"] = {edge.first, edge.second};
                rows.push_back(std::move(j));
            }
            os << rows.dump(2) << "\n";
        } else {
            os << "edge,fooling,case,lower_rate,upper_rate\n";
            for (const auto& edge : tree.edges) {
                const auto rep = edge_complexity(tree, spec, edge);
                os << edge.first << '-' << edge.second << ',' << rep.fooling_size << ','
                   << to_string(rep.case_tag) << ',' << fmt(rep.lower_bits_per_instance) << ','
                   << fmt(rep.upper_bits_per_instance) << '\n';
            }
        }
        emit(os.str(), out_path);
        return 0;
    }

    if (m1 < 0 || m2 < 0) throw CLI::ValidationError("--m1 and --m2 are required without --tree");
    BoundReport rep;
    if (spec.kind == FunctionKind::SumThreshold)
        rep = threshold_complexity(spec.theta, m1, m2);
    else if (spec.kind == FunctionKind::SumInterval)
        rep = interval_bounds(spec.a, spec.b, m1, m2);
    else
        throw CLI::ValidationError("bounds are available for threshold and interval functions");

    if (format == "json") {
        auto j = bound_row_json(rep);
        j["m1"] = m1;
        j["m2"] = m2;
        os << j.dump(2) << "\n";
    } else {
        os << "fooling,case,lower_rate,upper_rate,regime_valid\n"
           << rep.fooling_size << ',' << to_string(rep.case_tag) << ','
           << fmt(rep.lower_bits_per_instance) << ',' << fmt(rep.upper_bits_per_instance) << ','
           << (rep.regime_valid ? 1 : 0) << '\n';
    }
    emit(os.str(), out_path);
    return 0;
}

int cmd_simulate(bool two_node, const std::string& tree_path, const std::string& subtree_net_path,
                 const SpecFlags& spec_flags, int m1, int m2, int starter, int block_len,
                 bool exhaustive, std::uint64_t trials, std::uint64_t seed, std::optional<int> root,
                 int jobs, const std::string& format, const std::string& out_path) {
    const auto spec = spec_flags.resolve();
    if (!exhaustive && trials == 0) throw CLI::ValidationError("choose --exhaustive or --trials N");

    Scenario scenario = [&]() -> Scenario {
        if (two_node) {
            if (m1 < 0 || m2 < 0) throw CLI::ValidationError("--two-node needs --m1 and --m2");
            TwoNodeScenario s;
            s.inst.m1 = m1;
            s.inst.m2 = m2;
            s.inst.spec = spec;
            s.inst.B = block_len;
            s.inst.starter = starter;
            return s;
        }
        if (tree_path.empty()) throw CLI::ValidationError("choose --two-node or --tree FILE");
        if (!subtree_net_path.empty()) {
            SubtreeScenario s;
            s.net = Network::load(subtree_net_path);
            s.tree = Network::load(tree_path);
            s.spec = spec;
            s.block_len = block_len;
            if (root) s.root = root;
            return s;
        }
        TreeScenario s;
        s.tree = Network::load(tree_path);
        s.spec = spec;
        s.block_len = block_len;
        if (root) s.root = root;
        return s;
    }();

    sweep::Policy policy{jobs};
    log_info("simulate: " + spec.describe() + ", B=" + std::to_string(block_len) +
             (exhaustive ? ", exhaustive" : ", trials=" + std::to_string(trials)));
    const auto report = exhaustive ? exhaustive_verify(scenario, policy)
                                   : random_verify(scenario, trials, seed, policy);

    std::ostringstream os;
    if (format == "json")
        os << report.to_json_string();
    else
        report.write_csv(os);
    emit(os.str(), out_path);
    log_info("simulate: checked " + std::to_string(report.instances_checked) + " assignments, " +
             std::to_string(report.decode_errors) + " decode errors");
    return report.pass() ? 0 : 2;
}

nlohmann::ordered_json two_opt_row_json(const TwoOptRow& row) {
    nlohmann::ordered_json j;
    j["convention"] = to_string(row.convention);
    j["r_ach"] = row.r_ach;
    j["r_cut"] = row.r_cut;
    j["ratio"] = row.ratio;
    j["bound"] = row.bound;
    j["theorem_applicable"] = row.theorem_applicable;
    j["holds"] = row.holds;
    j["tight"] = row.tight;
    return j;
}

int cmd_graph(const std::string& net_path, const SpecFlags& spec_flags, bool star_mix, int jobs,
              const std::string& format, const std::string& out_path) {
    const auto net = Network::load(net_path);
    const auto spec = spec_flags.resolve();
    std::ostringstream os;

    if (star_mix) {
        const auto literal = star_mix_rate(net, spec, SumConvention::AlphabetSize);
        const auto maxsum = star_mix_rate(net, spec, SumConvention::MaxSum);
        if (format == "json") {
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (std::size_t e = 0; e < literal.edges.size(); ++e)
                rows.push_back({{"edge", {literal.edges[e].first, literal.edges[e].second}},
                                {"rate_alphabet", literal.rate[e]},
                                {"rate_maxsum", maxsum.rate[e]}});
            os << rows.dump(2) << "\n";
        } else {
            os << "edge,rate_alphabet,rate_maxsum\n";
            for (std::size_t e = 0; e < literal.edges.size(); ++e)
                os << literal.edges[e].first << '-' << literal.edges[e].second << ','
                   << fmt(literal.rate[e]) << ',' << fmt(maxsum.rate[e]) << '\n';
        }
        emit(os.str(), out_path);
        return 0;
    }

    const auto rep = two_opt_check(net, spec, sweep::Policy{jobs});
    if (format == "json") {
        nlohmann::ordered_json j;
        j["n"] = rep.n;
        j["rows"] = {two_opt_row_json(rep.maxsum), two_opt_row_json(rep.alphabet)};
        os << j.dump(2) << "\n";
    } else {
        os << "convention,r_ach,r_cut,ratio,bound,applicable,holds,tight\n";
        for (const auto& row : {rep.maxsum, rep.alphabet})
            os << to_string(row.convention) << ',' << fmt(row.r_ach) << ',' << fmt(row.r_cut)
               << ',' << fmt(row.ratio) << ',' << fmt(row.bound) << ','
               << (row.theorem_applicable ? 1 : 0) << ',' << (row.holds ? 1 : 0) << ','
               << (row.tight ? 1 : 0) << '\n';
    }
    emit(os.str(), out_path);
    return rep.maxsum.holds && rep.alphabet.holds ? 0 : 2;
}

int cmd_codebook(int k, int r, int block_len, const std::string& out_path) {
    const auto cb = Codebook::canonical(k, r, block_len);
    std::ostringstream os;
    cb.dump_csv(os);
    emit(os.str(), out_path);
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"zero-error block computation of sum-dependent functions"};
    app.require_subcommand(1);

    std::string format = "csv", out_path;

    auto* bounds = app.add_subcommand("bounds", "closed-form complexity bounds");
    SpecFlags bounds_spec;
    bounds_spec.add_to(*bounds);
    std::string bounds_tree;
    int b_m1 = -1, b_m2 = -1;
    bounds->add_option("--tree", bounds_tree, "tree network JSON file (one row per edge)");
    bounds->add_option("--m1", b_m1, "node 1 maximum letter");
    bounds->add_option("--m2", b_m2, "node 2 maximum letter");
    bounds->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    bounds->add_option("--out", out_path, "write the table here instead of stdout");

    auto* simulate = app.add_subcommand("simulate", "run and verify protocols");
    SpecFlags sim_spec;
    sim_spec.add_to(*simulate);
    bool two_node = false, exhaustive = false;
    std::string sim_tree, sim_net;
    int s_m1 = -1, s_m2 = -1, starter = 1, block_len = 1, jobs = 0;
    std::uint64_t trials = 0, seed = 0;
    int root_flag = INT32_MIN;
    simulate->add_flag("--two-node", two_node, "two-node scenario");
    simulate->add_option("--tree", sim_tree, "tree network JSON file");
    simulate->add_option("--subtree-scheme", sim_net,
                         "general network JSON file; --tree selects the spanning subtree");
    simulate->add_option("--m1", s_m1);
    simulate->add_option("--m2", s_m2);
    simulate->add_option("--starter", starter, "transmitting node (1 or 2)")
        ->check(CLI::IsMember({1, 2}));
    simulate->add_option("-B,--block", block_len, "block length")->check(CLI::PositiveNumber);
    simulate->add_flag("--exhaustive", exhaustive, "sweep every input assignment");
    simulate->add_option("--trials", trials, "randomized verification trials");
    simulate->add_option("--seed", seed, "randomized verification seed");
    simulate->add_option("--root", root_flag, "root node id (defaults to the file's root)");
    simulate->add_option("--jobs", jobs, "worker threads (0 = all, 1 = serial)");
    simulate->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--out", out_path);

    auto* graph = app.add_subcommand("graph", "cut-set bounds and star mixing");
    SpecFlags graph_spec;
    graph_spec.add_to(*graph);
    std::string graph_path;
    bool star_mix = false;
    graph->add_option("network", graph_path, "network JSON file")->required();
    graph->add_flag("--star-mix", star_mix, "print per-edge star-mixing rates (complete graphs)");
    graph->add_option("--jobs", jobs);
    graph->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    graph->add_option("--out", out_path);

    auto* codebook = app.add_subcommand("codebook", "dump a canonical codebook as block;codeword");
    int cb_k = 0, cb_r = 0, cb_b = 1;
    codebook->add_option("-k,--alphabet", cb_k, "alphabet size")->required();
    codebook->add_option("-r,--ambiguous", cb_r, "ambiguous letter count")->required();
    codebook->add_option("-B,--block", cb_b, "block length")->required();
    codebook->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (bounds->parsed())
            return cmd_bounds(bounds_spec, bounds_tree, b_m1, b_m2, format, out_path);
        if (simulate->parsed()) {
            std::optional<int> root;
            if (root_flag != INT32_MIN) root = root_flag;
            return cmd_simulate(two_node, sim_tree, sim_net, sim_spec, s_m1, s_m2, starter,
                                block_len, exhaustive, trials, seed, root, jobs, format, out_path);
        }
        if (graph->parsed())
            return cmd_graph(graph_path, graph_spec, star_mix, jobs, format, out_path);
        if (codebook->parsed()) return cmd_codebook(cb_k, cb_r, cb_b, out_path);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const resource_error& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const protocol_error& e) {
        std::cerr << "protocol violation: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
