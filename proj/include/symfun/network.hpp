#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace symfun {

// Undirected network of measurement nodes. Nodes carry alphabet sizes
// l >= 2 (letters 0..l-1); edges are ideal bit pipes. Nodes are kept sorted
// by id and edges normalized to (low id, high id) ascending, so file order
// never leaks into results.
struct Network {
    std::vector<int> ids;
    std::vector<int> alphabet;  // per node, aligned with ids
    std::vector<std::pair<int, int>> edges;
    std::optional<int> root;

    int node_count() const { return static_cast<int>(ids.size()); }
    int index_of(int id) const;  // throws on unknown id
    int alphabet_of(int id) const { return alphabet[static_cast<std::size_t>(index_of(id))]; }

    // Sum over nodes of (l - 1): the maximum achievable total measurement.
    long long max_sum() const;
    // Sum of alphabet sizes.
    long long alphabet_total() const;

    bool has_edge(int u, int v) const;
    bool is_connected() const;
    bool is_tree() const;
    bool is_complete() const;

    // Throws std::invalid_argument on malformed input (duplicate ids,
    // alphabet < 2, self-loops, duplicate or dangling edges, disconnected).
    void validate() const;

    static Network from_json(const nlohmann::json& j);
    static Network load(const std::string& path);
    nlohmann::json to_json() const;

    static Network path(int nodes, int alphabet_size = 2);
    static Network star(int leaves, int alphabet_size = 2);
    static Network complete(int nodes, int alphabet_size = 2);
    static Network of(std::vector<int> alphabets, std::vector<std::pair<int, int>> edges,
                      std::optional<int> root = std::nullopt);
};

}  // namespace symfun
