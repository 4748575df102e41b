#pragma once

#include "urlab/rational.hpp"
#include "urlab/reliability.hpp"

#include <json.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace urlab {

/// Probabilistic items (vertices plus edges whose probability is neither 0
/// nor 1) enumerated by the brute-force oracles.
inline constexpr std::size_t kDefaultMaxItems = 26;
inline constexpr std::size_t kHardMaxItems = 40;

struct BipartiteGraph {
    std::vector<std::string> U;
    std::vector<std::string> V;
    std::vector<std::pair<std::string, std::string>> E;

    /// Throws PreconditionError unless U and V are duplicate-free lists of
    /// identifiers and E is a duplicate-free subset of U x V. A label may
    /// appear on both sides.
    void validate() const;
};

/// {"U":[...],"V":[...],"E":[[u,v],...]}
BipartiteGraph bipartite_from_json(const nlohmann::json &json);
nlohmann::json to_json(const BipartiteGraph &graph);

/// Undirected graph with distinguished source r and sink s.
struct STGraph {
    std::vector<std::string> vertices;
    /// unordered pairs, stored with first < second
    std::vector<std::pair<std::string, std::string>> edges;
    std::string r;
    std::string s;

    /// Sorts vertices and edges, drops duplicate edges and checks r != s,
    /// endpoints in V and no self-loops.
    void normalize();
    std::size_t index_of(std::string_view vertex) const;
    bool adjacent(std::string_view a, std::string_view b) const;
};

STGraph make_stgraph(std::vector<std::string> vertices, std::vector<std::pair<std::string, std::string>> edges,
                     std::string r, std::string s);

/// Text format: a header `st <r> <s>`, then one `u v` per line; a line with a
/// single name declares an isolated vertex. `#`, `%` and `//` comments.
STGraph parse_stgraph(std::string_view text);
std::string serialize_stgraph(const STGraph &graph);
/// {"V":[...],"E":[[u,v],...],"r":..,"s":..}
STGraph stgraph_from_json(const nlohmann::json &json);
nlohmann::json to_json(const STGraph &graph);

/// Keeps each U-vertex with probability lambda, each edge with mu and each
/// V-vertex with nu; probability that some kept edge has both endpoints
/// kept. Brute force over all (U', E', V').
Probability pp2dnf_prob(const Probability &lambda, const Probability &mu, const Probability &nu,
                        const BipartiteGraph &graph, bool unchecked = false,
                        std::size_t cap = kDefaultMaxItems);

/// The TID with R(u,u) for U (lambda), S(u,v) for E (mu), T(v,v) for V (nu).
TID pp2dnf_tid(const Probability &lambda, const Probability &mu, const Probability &nu,
               const BipartiteGraph &graph);
/// pqe of R(x,x),S(x,y),T(y,y) on pp2dnf_tid.
Probability pp2dnf_as_pqe(const Probability &lambda, const Probability &mu, const Probability &nu,
                          const BipartiteGraph &graph, bool unchecked = false,
                          std::size_t cap = kDefaultMaxItems);

/// Each vertex kept with probability phi, each edge between kept vertices
/// with eta; probability that r and s are kept and connected.
Probability ustcon_prob(const Probability &phi, const Probability &eta, const STGraph &graph,
                        bool unchecked = false, std::size_t cap = kDefaultMaxItems);

/// Same with one probability per vertex and per edge (aligned with the
/// normalized vertex and edge order).
Probability st_reliability(const STGraph &graph, const std::vector<Probability> &vertex_prob,
                           const std::vector<Probability> &edge_prob, std::size_t cap = kDefaultMaxItems);

/// True iff r and s are connected using only the given vertices.
bool st_connected(const STGraph &graph, const std::vector<bool> &kept_vertices);

} // namespace urlab
