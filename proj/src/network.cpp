#include "symfun/network.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

namespace symfun {

int Network::index_of(int id) const {
    const auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id)
        throw std::invalid_argument("network: unknown node id " + std::to_string(id));
    return static_cast<int>(it - ids.begin());
}

long long Network::max_sum() const {
    long long s = 0;
    for (int l : alphabet) s += l - 1;
    return s;
}

long long Network::alphabet_total() const {
    long long s = 0;
    for (int l : alphabet) s += l;
    return s;
}

bool Network::has_edge(int u, int v) const {
    const auto e = std::minmax(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::pair<int, int>(e.first, e.second));
}

bool Network::is_connected() const {
    const int n = node_count();
    if (n == 0) return false;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& [u, v] : edges) {
        adj[static_cast<std::size_t>(index_of(u))].push_back(index_of(v));
        adj[static_cast<std::size_t>(index_of(v))].push_back(index_of(u));
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    return reached == n;
}

bool Network::is_tree() const {
    return static_cast<int>(edges.size()) == node_count() - 1 && is_connected();
}

bool Network::is_complete() const {
    const auto n = static_cast<std::size_t>(node_count());
    return edges.size() == n * (n - 1) / 2;
}

void Network::validate() const {
    if (ids.empty()) throw std::invalid_argument("network: no nodes");
    if (ids.size() != alphabet.size()) throw std::invalid_argument("network: ids/alphabets mismatch");
    for (std::size_t i = 1; i < ids.size(); ++i)
        if (ids[i] <= ids[i - 1]) throw std::invalid_argument("network: duplicate node id");
    for (int l : alphabet)
        if (l < 2) throw std::invalid_argument("network: alphabet sizes must be >= 2");
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("network: self-loop on node " + std::to_string(u));
        index_of(u);
        index_of(v);
        if (!seen.insert(std::minmax(u, v)).second)
            throw std::invalid_argument("network: duplicate edge");
    }
    if (root) index_of(*root);
    if (!is_connected()) throw std::invalid_argument("network: not connected");
}

Network Network::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
        throw std::invalid_argument("network: expected {\"nodes\":[...],\"edges\":[...]}");
    Network net;
    std::vector<std::pair<int, int>> raw;  // (id, alphabet)
    for (const auto& nj : j.at("nodes"))
        raw.emplace_back(nj.at("id").get<int>(), nj.at("alphabet").get<int>());
    std::sort(raw.begin(), raw.end());
    for (const auto& [id, l] : raw) {
        net.ids.push_back(id);
        net.alphabet.push_back(l);
    }
    for (const auto& ej : j.at("edges")) {
        if (!ej.is_array() || ej.size() != 2)
            throw std::invalid_argument("network: each edge must be a [u, v] pair");
        net.edges.push_back(std::minmax(ej.at(0).get<int>(), ej.at(1).get<int>()));
    }
    std::sort(net.edges.begin(), net.edges.end());
    if (j.contains("root")) net.root = j.at("root").get<int>();
    net.validate();
    return net;
}

Network Network::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("network: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("network: " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json Network::to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < ids.size(); ++i)
        nodes.push_back({{"id", ids[i]}, {"alphabet", alphabet[i]}});
    nlohmann::json ej = nlohmann::json::array();
    for (const auto& [u, v] : edges) ej.push_back({u, v});
    nlohmann::json j{{"nodes", nodes}, {"edges", ej}};
    if (root) j["root"] = *root;
    return j;
}

Network Network::of(std::vector<int> alphabets, std::vector<std::pair<int, int>> edge_list,
                    std::optional<int> root) {
    Network net;
    for (int i = 0; i < static_cast<int>(alphabets.size()); ++i) net.ids.push_back(i);
    net.alphabet = std::move(alphabets);
    for (auto& [u, v] : edge_list) net.edges.push_back(std::minmax(u, v));
    std::sort(net.edges.begin(), net.edges.end());
    net.root = root;
    net.validate();
    return net;
}

Network Network::path(int nodes, int alphabet_size) {
    std::vector<int> alpha(static_cast<std::size_t>(nodes), alphabet_size);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < nodes; ++i) edges.emplace_back(i, i + 1);
    return of(std::move(alpha), std::move(edges), 0);
}

Network Network::star(int leaves, int alphabet_size) {
    std::vector<int> alpha(static_cast<std::size_t>(leaves) + 1, alphabet_size);
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return of(std::move(alpha), std::move(edges), 0);
}

Network Network::complete(int nodes, int alphabet_size) {
    std::vector<int> alpha(static_cast<std::size_t>(nodes), alphabet_size);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < nodes; ++i)
        for (int j = i + 1; j < nodes; ++j) edges.emplace_back(i, j);
    return of(std::move(alpha), std::move(edges));
}

}  // namespace symfun
