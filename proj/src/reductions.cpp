#include "urlab/reductions.hpp"

#include "urlab/error.hpp"

#include <bit>
#include <cmath>
#include <set>

namespace urlab {

const char *provenance_name(Provenance provenance) {
    switch (provenance) {
    case Provenance::BruteForce:
        return "brute-force";
    case Provenance::Collapsed:
        return "collapsed";
    case Provenance::External:
        return "external";
    }
    return "?";
}

namespace {

void require_open(const Probability &p, std::string_view name) {
    if (p.is_zero() || p.is_one())
        throw PreconditionError(std::string(name) + " must lie strictly between 0 and 1 (got " + p.str() + ")");
}

std::vector<std::string> inner_vertices(const STGraph &g) {
    std::vector<std::string> out;
    for (const auto &x : g.vertices)
        if (x != g.r && x != g.s)
            out.push_back(x);
    return out;
}

// Coefficients (in increasing degree) of the polynomial through the points.
std::vector<Rational> vandermonde_solve(const std::vector<Rational> &xs, const std::vector<Rational> &ys) {
    const std::size_t m = xs.size();
    std::vector<Rational> c = ys;
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = m - 1; i >= level; --i) {
            Rational dx = xs[i] - xs[i - level];
            if (dx == 0)
                throw InternalError("interpolation nodes are not pairwise distinct");
            c[i] = (c[i] - c[i - 1]) / dx;
            if (i == level)
                break;
        }
    // expand the Newton form c0 + c1 (x-x0) + c2 (x-x0)(x-x1) + ...
    std::vector<Rational> poly{c[m - 1]};
    for (std::size_t k = m - 1; k-- > 0;) {
        std::vector<Rational> next(poly.size() + 1, Rational(0));
        for (std::size_t d = 0; d < poly.size(); ++d) {
            next[d + 1] += poly[d];
            next[d] -= poly[d] * xs[k];
        }
        next[0] += c[k];
        poly = std::move(next);
    }
    for (auto &p : poly)
        p.canonicalize();
    return poly;
}

} // namespace

// ---------------------------------------------------------------------------

OracleAnswer brute_force_node_oracle(const STGraph &graph, const Probability &phi, unsigned q) {
    STGraph copies = build_vertex_copies(graph, q);
    return {ustcon_prob(phi, Probability::one(), copies, true), Provenance::BruteForce};
}

OracleAnswer collapsed_node_oracle(const STGraph &graph, const Probability &phi, unsigned q) {
    const Probability survives(Rational(1 - pow(Rational(1 - phi.value()), q)));
    std::vector<Probability> vp;
    for (const auto &x : graph.vertices)
        vp.push_back(x == graph.r || x == graph.s ? phi : survives);
    std::vector<Probability> ep(graph.edges.size(), Probability::one());
    return {st_reliability(graph, vp, ep), Provenance::Collapsed};
}

OracleAnswer brute_force_path_oracle(const STGraph &graph, const Probability &phi, const Probability &eta,
                                     unsigned q) {
    auto paths = build_parallel_paths(graph, q);
    return {ustcon_prob(phi, eta, paths.graph, true, kHardMaxItems), Provenance::BruteForce};
}

OracleAnswer collapsed_ustcon_oracle(const STGraph &graph, const Probability &phi, const Probability &eta,
                                     unsigned q) {
    const Rational zeta = phi.value() * eta.value() * eta.value();
    const Probability realized(Rational(1 - pow(Rational(1 - zeta), q)));
    std::vector<Probability> vp(graph.vertices.size(), phi);
    std::vector<Probability> ep(graph.edges.size(), realized);
    return {st_reliability(graph, vp, ep), Provenance::Collapsed};
}

// ---------------------------------------------------------------------------

STGraph build_vertex_copies(const STGraph &graph, unsigned q) {
    if (q == 0)
        throw PreconditionError("build_vertex_copies needs q >= 1");
    if (graph.adjacent(graph.r, graph.s))
        throw PreconditionError("build_vertex_copies needs r and s non-adjacent");
    std::map<std::string, std::vector<std::string>> copies;
    std::set<std::string> names;
    for (const auto &x : graph.vertices) {
        if (x == graph.r || x == graph.s) {
            copies[x] = {x};
        } else {
            for (unsigned i = 1; i <= q; ++i)
                copies[x].push_back(x + ":" + std::to_string(i));
        }
        for (const auto &c : copies[x])
            if (!names.insert(c).second)
                throw PreconditionError("vertex copy name '" + c + "' clashes with an existing vertex");
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto &[a, b] : graph.edges)
        for (const auto &ca : copies[a])
            for (const auto &cb : copies[b])
                edges.emplace_back(ca, cb);
    return make_stgraph(std::vector<std::string>(names.begin(), names.end()), std::move(edges), graph.r, graph.s);
}

Rational node_alpha(const Probability &phi, unsigned q) {
    Rational keep_none = pow(Rational(1 - phi.value()), q);
    Rational out = 1 / keep_none - 1;
    out.canonicalize();
    return out;
}

Rational node_normalization(const Probability &phi, unsigned q, std::size_t n) {
    return pow(pow(Rational(1 - phi.value()), q), static_cast<unsigned long>(n - 2));
}

std::vector<BigInt> interpolate_node_counts(const Probability &phi, const std::vector<OracleAnswer> &answers,
                                            std::size_t n) {
    require_open(phi, "phi");
    if (n < 2)
        throw PreconditionError("interpolation needs at least the two endpoints");
    if (answers.size() != n - 1)
        throw PreconditionError("interpolation needs one answer per q = 1.." + std::to_string(n - 1));
    std::vector<Rational> xs, ys;
    for (unsigned q = 1; q <= n - 1; ++q) {
        xs.push_back(node_alpha(phi, q));
        Rational y = answers[q - 1].value.value() / node_normalization(phi, q, n);
        y.canonicalize();
        ys.push_back(y);
    }
    auto coeffs = vandermonde_solve(xs, ys);
    std::vector<BigInt> out;
    for (const auto &c : coeffs) {
        if (c.get_den() != 1)
            throw InternalError("interpolated count " + rational_str(c) + " is not an integer");
        out.push_back(c.get_num());
    }
    return out;
}

std::vector<Rational> forward_node_answers(const Probability &phi, const std::vector<BigInt> &counts,
                                           std::size_t n) {
    std::vector<Rational> out;
    for (unsigned q = 1; q <= n - 1; ++q) {
        const Rational alpha = node_alpha(phi, q);
        Rational sum = 0, power = 1;
        for (const auto &x : counts) {
            sum += Rational(x) * power;
            power *= alpha;
        }
        Rational p = sum * node_normalization(phi, q, n);
        p.canonicalize();
        out.push_back(p);
    }
    return out;
}

std::vector<BigInt> good_subset_counts(const STGraph &graph) {
    auto inner = inner_vertices(graph);
    if (inner.size() > 24)
        throw CapExceeded("good-subset enumeration", inner.size(), 24);
    std::vector<std::size_t> idx;
    for (const auto &x : inner)
        idx.push_back(graph.index_of(x));
    std::vector<BigInt> counts(inner.size() + 1, 0);
    std::vector<bool> kept(graph.vertices.size(), false);
    kept[graph.index_of(graph.r)] = true;
    kept[graph.index_of(graph.s)] = true;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << inner.size()); ++m) {
        for (std::size_t i = 0; i < inner.size(); ++i)
            kept[idx[i]] = (m >> i) & 1U;
        if (st_connected(graph, kept))
            counts[static_cast<std::size_t>(std::popcount(m))] += 1;
    }
    return counts;
}

NodePipelineRun node_connectedness_pipeline(const STGraph &graph, const Probability &phi,
                                            const NodeOracle &oracle) {
    require_open(phi, "phi");
    if (graph.adjacent(graph.r, graph.s))
        throw PreconditionError("node pipeline needs r and s non-adjacent");
    const std::size_t n = graph.vertices.size();
    const Rational endpoints = phi.value() * phi.value();
    NodePipelineRun run;
    for (unsigned q = 1; q <= n - 1; ++q) {
        OracleAnswer a = oracle(graph, phi, q);
        Rational conditioned = a.value.value() / endpoints;
        conditioned.canonicalize();
        run.answers.push_back({Probability(conditioned), a.provenance});
    }
    run.counts = interpolate_node_counts(phi, run.answers, n);
    run.total = 0;
    for (const auto &x : run.counts)
        run.total += x;
    return run;
}

nlohmann::json to_json(const NodePipelineRun &run) {
    nlohmann::json counts = nlohmann::json::array();
    for (const auto &x : run.counts)
        counts.push_back(x.get_str());
    nlohmann::json answers = nlohmann::json::array();
    for (std::size_t i = 0; i < run.answers.size(); ++i)
        answers.push_back({{"q", i + 1},
                           {"value", run.answers[i].value.str()},
                           {"provenance", provenance_name(run.answers[i].provenance)}});
    return {{"total", run.total.get_str()},
            {"counts", counts},
            {"answers", answers},
            {"conditioning", "r and s present (oracle answers divided by phi^2)"}};
}

// ---------------------------------------------------------------------------

Rational saturation_bound(const Probability &zeta, unsigned q, unsigned chi) {
    Rational miss = pow(Rational(1 - zeta.value()), q);
    Rational out = 1 - pow(Rational(1 - miss), chi);
    out.canonicalize();
    return out;
}

unsigned saturation_parameter(const Probability &zeta, const Probability &epsilon, unsigned chi) {
    require_open(zeta, "zeta");
    require_open(epsilon, "epsilon");
    if (chi == 0)
        throw PreconditionError("chi must be at least 1");
    const Rational target = epsilon.value() / Rational(chi);
    const Rational base = 1 - zeta.value();
    auto below = [&](unsigned q) { return pow(base, q) < target; };

    const long double threshold = (std::log(static_cast<long double>(chi)) - std::log(epsilon.value().get_d())) /
                                  -std::log1p(-zeta.value().get_d());
    unsigned q = static_cast<unsigned>(std::max<long double>(1, std::floor(threshold) + 1));
    // the float estimate is only a starting point; the exact test decides
    while (q > 1 && below(q - 1))
        --q;
    while (!below(q))
        ++q;
    if (!(saturation_bound(zeta, q, chi) < epsilon.value()))
        throw InternalError("saturation bound does not hold for q = " + std::to_string(q));
    return q;
}

ParallelPaths build_parallel_paths(const STGraph &graph, unsigned q) {
    if (q == 0)
        throw PreconditionError("build_parallel_paths needs q >= 1");
    ParallelPaths out;
    std::set<std::string> names(graph.vertices.begin(), graph.vertices.end());
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto &[a, b] : graph.edges)
        for (unsigned p = 1; p <= q; ++p) {
            std::string w = "w:" + a + ":" + b + ":" + std::to_string(p);
            if (!names.insert(w).second)
                throw PreconditionError("path vertex '" + w + "' clashes with an existing vertex");
            out.registry[w] = {{a, b}, p};
            edges.emplace_back(a, w);
            edges.emplace_back(w, b);
        }
    out.graph = make_stgraph(std::vector<std::string>(names.begin(), names.end()), std::move(edges), graph.r,
                             graph.s);
    return out;
}

SaturationRun saturation_pipeline(const STGraph &graph, const Probability &phi, const Probability &eta,
                                  const PathOracle &oracle) {
    if (phi.is_zero())
        throw PreconditionError("phi must be positive");
    require_open(eta, "eta");
    const std::size_t n = graph.vertices.size();
    const unsigned m = static_cast<unsigned>(graph.edges.size());
    const BigInt b = phi.value().get_den();
    const BigInt scale = pow(b, n);

    SaturationRun run;
    run.epsilon = Rational(1, 1) / Rational(2 * scale);
    run.epsilon.canonicalize();
    const Probability zeta(Rational(phi.value() * eta.value() * eta.value()));
    // chi = m; a graph without edges needs no saturation but q >= 1 anyway
    run.q = saturation_parameter(zeta, Probability(run.epsilon), std::max(1U, m));
    run.epsilon_prime = saturation_bound(zeta, run.q, m);
    if (!(run.epsilon_prime < run.epsilon))
        throw InternalError("invalid-world mass " + rational_str(run.epsilon_prime) + " is not below " +
                            rational_str(run.epsilon));
    run.answer = oracle(graph, phi, eta, run.q);
    run.scaled = run.answer.value.value() * Rational(scale);
    run.scaled.canonicalize();
    run.z = round_nearest(run.scaled);
    Rational gap = run.scaled - Rational(run.z);
    if (abs(gap) >= Rational(1, 2))
        throw InternalError("rounding gap " + rational_str(gap) + " is not below 1/2");
    return run;
}

nlohmann::json to_json(const SaturationRun &run) {
    return {{"z", run.z.get_str()},
            {"q", run.q},
            {"epsilon", rational_str(run.epsilon)},
            {"epsilon_prime", rational_str(run.epsilon_prime)},
            {"oracle", run.answer.value.str()},
            {"provenance", provenance_name(run.answer.provenance)},
            {"scaled", rational_str(run.scaled)}};
}

} // namespace urlab
