#include "urlab/hard_problems.hpp"

#include "urlab/error.hpp"
#include "urlab/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace urlab {

namespace {

void check_items(std::string_view what, std::size_t items, std::size_t cap) {
    const std::size_t limit = std::min(cap, kHardMaxItems);
    if (items > limit)
        throw CapExceeded(std::string(what), items, limit);
}

void require_open(const Probability &p, std::string_view name) {
    if (p.is_zero() || p.is_one())
        throw PreconditionError(std::string(name) + " must lie strictly between 0 and 1 (got " + p.str() + ")");
}

void require_positive(const Probability &p, std::string_view name) {
    if (p.is_zero())
        throw PreconditionError(std::string(name) + " must be positive");
}

// W[m] over items[offset, offset+bits): product of numerators for set bits
// and den - num for clear bits.
std::vector<BigInt> weight_table(const std::vector<Rational> &items, std::size_t offset, std::size_t bits) {
    std::vector<BigInt> table(std::size_t{1} << bits);
    table[0] = 1;
    for (std::size_t i = 0; i < bits; ++i) {
        const Rational &p = items[offset + i];
        const BigInt present = p.get_num();
        const BigInt absent = p.get_den() - p.get_num();
        const std::size_t half = std::size_t{1} << i;
        for (std::size_t m = 0; m < half; ++m) {
            table[m | half] = table[m] * present;
            table[m] *= absent;
        }
    }
    return table;
}

std::string strip_comment(std::string_view line) {
    if (auto c = line.find("//"); c != std::string_view::npos)
        line = line.substr(0, c);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
        line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
        line.remove_suffix(1);
    if (!line.empty() && (line.front() == '#' || line.front() == '%'))
        return {};
    return std::string(line);
}

std::string json_name(const nlohmann::json &value, std::string_view what) {
    if (value.is_string())
        return value.get<std::string>();
    if (value.is_number_integer())
        return std::to_string(value.get<long long>());
    throw ParseError(std::string(what) + " must be a string or an integer", 1);
}

} // namespace

// ---------------------------------------------------------------------------

void BipartiteGraph::validate() const {
    std::set<std::string> us(U.begin(), U.end()), vs(V.begin(), V.end());
    if (us.size() != U.size() || vs.size() != V.size())
        throw PreconditionError("bipartite graph has a repeated vertex");
    // U and V are separate namespaces: the same label may name a vertex on
    // each side
    for (const auto *side : {&U, &V})
        for (const auto &x : *side)
            if (!is_identifier(x))
                throw PreconditionError("bad vertex name '" + x + "'");
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto &e : E) {
        if (!us.contains(e.first) || !vs.contains(e.second))
            throw PreconditionError("edge (" + e.first + "," + e.second + ") is not in U x V");
        if (!seen.insert(e).second)
            throw PreconditionError("repeated edge (" + e.first + "," + e.second + ")");
    }
}

BipartiteGraph bipartite_from_json(const nlohmann::json &json) {
    if (!json.is_object() || !json.contains("U") || !json.contains("V") || !json.contains("E"))
        throw ParseError("bipartite graph JSON needs \"U\", \"V\" and \"E\"", 1);
    BipartiteGraph g;
    for (const auto &x : json["U"])
        g.U.push_back(json_name(x, "U vertex"));
    for (const auto &x : json["V"])
        g.V.push_back(json_name(x, "V vertex"));
    for (const auto &e : json["E"]) {
        if (!e.is_array() || e.size() != 2)
            throw ParseError("bipartite edge must be [u, v]", 1);
        g.E.emplace_back(json_name(e[0], "edge endpoint"), json_name(e[1], "edge endpoint"));
    }
    g.validate();
    return g;
}

nlohmann::json to_json(const BipartiteGraph &g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto &[a, b] : g.E)
        edges.push_back({a, b});
    return {{"U", g.U}, {"V", g.V}, {"E", edges}};
}

void STGraph::normalize() {
    std::sort(vertices.begin(), vertices.end());
    if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
        throw PreconditionError("graph has a repeated vertex");
    for (const auto &x : vertices)
        if (!is_identifier(x))
            throw PreconditionError("bad vertex name '" + x + "'");
    if (r == s)
        throw PreconditionError("source and sink must differ");
    if (!std::binary_search(vertices.begin(), vertices.end(), r) ||
        !std::binary_search(vertices.begin(), vertices.end(), s))
        throw PreconditionError("source and sink must be vertices of the graph");
    for (auto &[a, b] : edges) {
        if (a == b)
            throw PreconditionError("self-loop on '" + a + "'");
        if (!std::binary_search(vertices.begin(), vertices.end(), a) ||
            !std::binary_search(vertices.begin(), vertices.end(), b))
            throw PreconditionError("edge {" + a + "," + b + "} uses an unknown vertex");
        if (b < a)
            std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

std::size_t STGraph::index_of(std::string_view vertex) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), vertex);
    if (it == vertices.end() || *it != vertex)
        throw PreconditionError("unknown vertex '" + std::string(vertex) + "'");
    return static_cast<std::size_t>(it - vertices.begin());
}

bool STGraph::adjacent(std::string_view a, std::string_view b) const {
    std::pair<std::string, std::string> key{std::string(std::min(a, b)), std::string(std::max(a, b))};
    return std::binary_search(edges.begin(), edges.end(), key);
}

STGraph make_stgraph(std::vector<std::string> vertices, std::vector<std::pair<std::string, std::string>> edges,
                     std::string r, std::string s) {
    STGraph g{std::move(vertices), std::move(edges), std::move(r), std::move(s)};
    g.normalize();
    return g;
}

STGraph parse_stgraph(std::string_view text) {
    STGraph g;
    std::set<std::string> vertices;
    bool header = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string line = strip_comment(raw);
        if (line.empty())
            continue;
        std::istringstream tokens(line);
        std::vector<std::string> words;
        for (std::string w; tokens >> w;)
            words.push_back(w);
        if (!header) {
            if (words.size() != 3 || words[0] != "st")
                throw ParseError("expected header 'st <source> <sink>'", line_no);
            g.r = words[1];
            g.s = words[2];
            vertices.insert(g.r);
            vertices.insert(g.s);
            header = true;
            continue;
        }
        if (words.size() > 2)
            throw ParseError("expected 'u v' or a single vertex", line_no);
        for (const auto &w : words)
            if (!is_identifier(w))
                throw ParseError("bad vertex name '" + w + "'", line_no);
        vertices.insert(words.begin(), words.end());
        if (words.size() == 2) {
            if (words[0] == words[1])
                throw ParseError("self-loop on '" + words[0] + "'", line_no);
            g.edges.emplace_back(words[0], words[1]);
        }
    }
    if (!header)
        throw ParseError("missing header 'st <source> <sink>'", line_no == 0 ? 1 : line_no);
    g.vertices.assign(vertices.begin(), vertices.end());
    try {
        g.normalize();
    } catch (const PreconditionError &e) {
        throw ParseError(e.what(), 1);
    }
    return g;
}

std::string serialize_stgraph(const STGraph &g) {
    std::string out = "st " + g.r + " " + g.s + "\n";
    std::set<std::string> touched;
    for (const auto &[a, b] : g.edges) {
        out += a + " " + b + "\n";
        touched.insert(a);
        touched.insert(b);
    }
    for (const auto &x : g.vertices)
        if (!touched.contains(x) && x != g.r && x != g.s)
            out += x + "\n";
    return out;
}

STGraph stgraph_from_json(const nlohmann::json &json) {
    if (!json.is_object() || !json.contains("V") || !json.contains("E") || !json.contains("r") ||
        !json.contains("s"))
        throw ParseError("graph JSON needs \"V\", \"E\", \"r\" and \"s\"", 1);
    STGraph g;
    for (const auto &x : json["V"])
        g.vertices.push_back(json_name(x, "vertex"));
    for (const auto &e : json["E"]) {
        if (!e.is_array() || e.size() != 2)
            throw ParseError("edge must be [u, v]", 1);
        g.edges.emplace_back(json_name(e[0], "edge endpoint"), json_name(e[1], "edge endpoint"));
    }
    g.r = json_name(json["r"], "r");
    g.s = json_name(json["s"], "s");
    try {
        g.normalize();
    } catch (const PreconditionError &e) {
        throw ParseError(e.what(), 1);
    }
    return g;
}

nlohmann::json to_json(const STGraph &g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto &[a, b] : g.edges)
        edges.push_back({a, b});
    return {{"V", g.vertices}, {"E", edges}, {"r", g.r}, {"s", g.s}};
}

// ---------------------------------------------------------------------------

Probability pp2dnf_prob(const Probability &lambda, const Probability &mu, const Probability &nu,
                        const BipartiteGraph &graph, bool unchecked, std::size_t cap) {
    graph.validate();
    if (!unchecked) {
        require_open(lambda, "lambda");
        require_open(nu, "nu");
        require_positive(mu, "mu");
    }
    const std::size_t nu_count = graph.U.size();
    const std::size_t nv_count = graph.V.size();
    const std::size_t ne = graph.E.size();
    check_items("pp2dnf brute force", nu_count + nv_count + ne, cap);

    std::vector<Rational> vertex_items;
    for (std::size_t i = 0; i < nu_count; ++i)
        vertex_items.push_back(lambda.value());
    for (std::size_t j = 0; j < nv_count; ++j)
        vertex_items.push_back(nu.value());
    std::vector<Rational> edge_items(ne, mu.value());
    auto wv = weight_table(vertex_items, 0, vertex_items.size());
    auto we = weight_table(edge_items, 0, ne);

    std::map<std::string, std::size_t> u_index, v_index;
    for (std::size_t i = 0; i < nu_count; ++i)
        u_index[graph.U[i]] = i;
    for (std::size_t j = 0; j < nv_count; ++j)
        v_index[graph.V[j]] = nu_count + j;

    // inner sum over E' depends only on which edges have both ends kept
    std::map<std::uint64_t, BigInt> inner_cache;
    BigInt numerator = 0;
    for (std::uint64_t vm = 0; vm < wv.size(); ++vm) {
        if (wv[vm] == 0)
            continue;
        std::uint64_t alive = 0;
        for (std::size_t k = 0; k < ne; ++k)
            if ((vm >> u_index[graph.E[k].first]) & 1U && (vm >> v_index[graph.E[k].second]) & 1U)
                alive |= std::uint64_t{1} << k;
        if (alive == 0)
            continue;
        auto [it, fresh] = inner_cache.try_emplace(alive);
        if (fresh) {
            BigInt sum = 0;
            for (std::uint64_t em = 0; em < we.size(); ++em)
                if (em & alive)
                    sum += we[em];
            it->second = sum;
        }
        numerator += wv[vm] * it->second;
    }
    BigInt denominator = 1;
    for (const auto &p : vertex_items)
        denominator *= p.get_den();
    for (const auto &p : edge_items)
        denominator *= p.get_den();
    Rational out(numerator, denominator);
    out.canonicalize();
    return Probability(out);
}

TID pp2dnf_tid(const Probability &lambda, const Probability &mu, const Probability &nu,
               const BipartiteGraph &graph) {
    graph.validate();
    std::map<Fact, Probability> table;
    for (const auto &x : graph.U)
        table.emplace(Fact{"R", x, x}, lambda);
    for (const auto &[a, b] : graph.E)
        table.emplace(Fact{"S", a, b}, mu);
    for (const auto &y : graph.V)
        table.emplace(Fact{"T", y, y}, nu);
    std::vector<Fact> facts;
    std::vector<Probability> probs;
    for (auto &[f, p] : table) {
        facts.push_back(f);
        probs.push_back(p);
    }
    return TID(Instance(std::move(facts)), std::move(probs));
}

Probability pp2dnf_as_pqe(const Probability &lambda, const Probability &mu, const Probability &nu,
                          const BipartiteGraph &graph, bool unchecked, std::size_t cap) {
    graph.validate();
    if (!unchecked) {
        require_open(lambda, "lambda");
        require_open(nu, "nu");
        require_positive(mu, "mu");
    }
    TID tid = pp2dnf_tid(lambda, mu, nu, graph);
    check_items("pp2dnf as pqe", tid.instance.size(), cap);
    return pqe(*builtin_query("q0"), tid, 1, std::min(cap, kHardMaxFacts));
}

// ---------------------------------------------------------------------------

bool st_connected(const STGraph &graph, const std::vector<bool> &kept) {
    const std::size_t r = graph.index_of(graph.r);
    const std::size_t s = graph.index_of(graph.s);
    if (!kept[r] || !kept[s])
        return false;
    std::vector<std::vector<std::size_t>> adj(graph.vertices.size());
    for (const auto &[a, b] : graph.edges) {
        std::size_t i = graph.index_of(a), j = graph.index_of(b);
        if (kept[i] && kept[j]) {
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
    }
    std::vector<bool> seen(graph.vertices.size(), false);
    std::vector<std::size_t> stack{r};
    seen[r] = true;
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        if (x == s)
            return true;
        for (std::size_t y : adj[x])
            if (!seen[y]) {
                seen[y] = true;
                stack.push_back(y);
            }
    }
    return false;
}

Probability st_reliability(const STGraph &graph, const std::vector<Probability> &vertex_prob,
                           const std::vector<Probability> &edge_prob, std::size_t cap) {
    const std::size_t n = graph.vertices.size();
    if (vertex_prob.size() != n || edge_prob.size() != graph.edges.size())
        throw PreconditionError("st_reliability needs one probability per vertex and per edge");
    if (n > 64)
        throw CapExceeded("st-reliability vertices", n, 64);
    const int r = static_cast<int>(graph.index_of(graph.r));
    const int s = static_cast<int>(graph.index_of(graph.s));

    std::uint64_t certain = 0;
    std::vector<int> vitems;
    std::vector<Rational> vprob;
    for (std::size_t i = 0; i < n; ++i) {
        if (vertex_prob[i].is_one()) {
            certain |= std::uint64_t{1} << i;
        } else if (!vertex_prob[i].is_zero()) {
            vitems.push_back(static_cast<int>(i));
            vprob.push_back(vertex_prob[i].value());
        }
    }
    struct ProbEdge {
        int a, b;
        Rational p;
    };
    std::vector<std::uint64_t> base_adj(n, 0);
    std::vector<ProbEdge> pedges;
    for (std::size_t k = 0; k < graph.edges.size(); ++k) {
        const int a = static_cast<int>(graph.index_of(graph.edges[k].first));
        const int b = static_cast<int>(graph.index_of(graph.edges[k].second));
        if (edge_prob[k].is_one()) {
            base_adj[a] |= std::uint64_t{1} << b;
            base_adj[b] |= std::uint64_t{1} << a;
        } else if (!edge_prob[k].is_zero()) {
            pedges.push_back({a, b, edge_prob[k].value()});
        }
    }
    check_items("st-reliability brute force", vitems.size() + pedges.size(), cap);

    BigInt denominator = 1;
    for (const auto &p : vprob)
        denominator *= p.get_den();
    for (const auto &e : pedges)
        denominator *= e.p.get_den();

    const std::size_t low = vitems.size() / 2;
    const std::size_t high = vitems.size() - low;
    auto wl = weight_table(vprob, 0, low);
    auto wh = weight_table(vprob, low, high);
    std::vector<std::uint64_t> low_bits(wl.size(), 0), high_bits(wh.size(), 0);
    for (std::size_t m = 0; m < wl.size(); ++m)
        for (std::size_t i = 0; i < low; ++i)
            if ((m >> i) & 1U)
                low_bits[m] |= std::uint64_t{1} << vitems[i];
    for (std::size_t m = 0; m < wh.size(); ++m)
        for (std::size_t i = 0; i < high; ++i)
            if ((m >> i) & 1U)
                high_bits[m] |= std::uint64_t{1} << vitems[low + i];

    BigInt numerator = 0;
    BigInt partial;
    if (pedges.empty()) {
        std::vector<std::uint64_t> masks(wl.size());
        std::vector<std::uint8_t> connected(wl.size());
        for (std::size_t h = 0; h < wh.size(); ++h) {
            for (std::size_t l = 0; l < wl.size(); ++l)
                masks[l] = certain | high_bits[h] | low_bits[l];
            kernels::induced_connected(base_adj, r, s, masks, connected);
            partial = 0;
            for (std::size_t l = 0; l < wl.size(); ++l)
                if (connected[l])
                    partial += wl[l];
            if (partial != 0)
                numerator += partial * wh[h];
        }
    } else {
        std::vector<std::uint64_t> adj(n);
        std::vector<Rational> inner_prob;
        std::vector<const ProbEdge *> inner;
        for (std::size_t h = 0; h < wh.size(); ++h) {
            for (std::size_t l = 0; l < wl.size(); ++l) {
                const std::uint64_t kept = certain | high_bits[h] | low_bits[l];
                if (!((kept >> r) & 1U) || !((kept >> s) & 1U))
                    continue;
                inner.clear();
                inner_prob.clear();
                BigInt outside = 1;
                for (const auto &e : pedges) {
                    if ((kept >> e.a) & 1U && (kept >> e.b) & 1U) {
                        inner.push_back(&e);
                        inner_prob.push_back(e.p);
                    } else {
                        outside *= e.p.get_den();
                    }
                }
                auto wi = weight_table(inner_prob, 0, inner.size());
                BigInt sum = 0;
                for (std::size_t em = 0; em < wi.size(); ++em) {
                    for (std::size_t v = 0; v < n; ++v)
                        adj[v] = base_adj[v];
                    for (std::size_t k = 0; k < inner.size(); ++k)
                        if ((em >> k) & 1U) {
                            adj[inner[k]->a] |= std::uint64_t{1} << inner[k]->b;
                            adj[inner[k]->b] |= std::uint64_t{1} << inner[k]->a;
                        }
                    std::uint8_t ok = 0;
                    kernels::induced_connected(adj, r, s, std::span<const std::uint64_t>(&kept, 1),
                                               std::span<std::uint8_t>(&ok, 1));
                    if (ok)
                        sum += wi[em];
                }
                if (sum != 0)
                    numerator += sum * outside * wl[l] * wh[h];
            }
        }
    }
    Rational out(numerator, denominator);
    out.canonicalize();
    return Probability(out);
}

Probability ustcon_prob(const Probability &phi, const Probability &eta, const STGraph &graph, bool unchecked,
                        std::size_t cap) {
    if (!unchecked) {
        require_positive(phi, "phi");
        require_positive(eta, "eta");
    }
    return st_reliability(graph, std::vector<Probability>(graph.vertices.size(), phi),
                          std::vector<Probability>(graph.edges.size(), eta), cap);
}

} // namespace urlab
