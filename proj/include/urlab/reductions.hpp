#pragma once

#include "urlab/hard_problems.hpp"
#include "urlab/rational.hpp"
#include "urlab/structure.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace urlab {

// ---------------------------------------------------------------------------
// Oracles

enum class Provenance { BruteForce, Collapsed, External };
const char *provenance_name(Provenance provenance);

struct OracleAnswer {
    Probability value;
    Provenance provenance = Provenance::BruteForce;
};

/// Answers ustcon_prob(phi, 1, build_vertex_copies(G, q)).
using NodeOracle = std::function<OracleAnswer(const STGraph &graph, const Probability &phi, unsigned q)>;
/// Answers ustcon_prob(phi, eta, build_parallel_paths(G, q)).
using PathOracle =
    std::function<OracleAnswer(const STGraph &graph, const Probability &phi, const Probability &eta, unsigned q)>;

/// Enumerates the vertex subsets of G_q.
OracleAnswer brute_force_node_oracle(const STGraph &graph, const Probability &phi, unsigned q);
/// Same value computed on G: an inner vertex survives when one of its q
/// copies does, which happens with probability 1 - (1-phi)^q.
OracleAnswer collapsed_node_oracle(const STGraph &graph, const Probability &phi, unsigned q);

OracleAnswer brute_force_path_oracle(const STGraph &graph, const Probability &phi, const Probability &eta,
                                     unsigned q);
/// Exact value on G where each edge is realized with probability
/// 1 - (1 - phi eta^2)^q.
OracleAnswer collapsed_ustcon_oracle(const STGraph &graph, const Probability &phi, const Probability &eta,
                                     unsigned q);

// ---------------------------------------------------------------------------
// Vertex copies and interpolation

/// Inner vertex x becomes x:1..x:q, pairwise non-adjacent; r and s are kept.
STGraph build_vertex_copies(const STGraph &graph, unsigned q);

/// alpha(q) = (1-phi)^-q - 1
Rational node_alpha(const Probability &phi, unsigned q);
/// ((1-phi)^q)^(n-2)
Rational node_normalization(const Probability &phi, unsigned q, std::size_t n);

/// Divides P_q (already conditioned on r and s) by the normalization and
/// solves the Vandermonde system for X_0..X_{n-2}.
std::vector<BigInt> interpolate_node_counts(const Probability &phi, const std::vector<OracleAnswer> &answers,
                                            std::size_t n);

/// Inverse of interpolate_node_counts: P_q for q = 1..n-1 from X.
std::vector<Rational> forward_node_answers(const Probability &phi, const std::vector<BigInt> &counts,
                                           std::size_t n);

/// Number of good subsets of V minus {r,s} of each size: subsets S with r
/// and s connected in the graph induced by S plus r and s.
std::vector<BigInt> good_subset_counts(const STGraph &graph);

struct NodePipelineRun {
    BigInt total;
    std::vector<BigInt> counts;
    /// P_q per q, divided by phi^2 (endpoints conditioned present)
    std::vector<OracleAnswer> answers;
};

NodePipelineRun node_connectedness_pipeline(const STGraph &graph, const Probability &phi,
                                            const NodeOracle &oracle = collapsed_node_oracle);
nlohmann::json to_json(const NodePipelineRun &run);

// ---------------------------------------------------------------------------
// Parallel paths and saturation

/// Smallest q >= 1 with (1-zeta)^q < epsilon/chi, which is the strict
/// threshold on q; the bound 1 - (1 - (1-zeta)^q)^chi < epsilon is then
/// re-checked exactly.
unsigned saturation_parameter(const Probability &zeta, const Probability &epsilon, unsigned chi);
/// 1 - (1 - (1-zeta)^q)^chi
Rational saturation_bound(const Probability &zeta, unsigned q, unsigned chi);

struct ParallelPaths {
    STGraph graph;
    /// intermediate vertex -> original edge and path index
    std::map<std::string, std::pair<std::pair<std::string, std::string>, unsigned>> registry;
};

/// Each edge {u,v} becomes q paths u - w:u:v:p - v.
ParallelPaths build_parallel_paths(const STGraph &graph, unsigned q);

struct SaturationRun {
    BigInt z;
    unsigned q = 0;
    Rational epsilon;
    Rational epsilon_prime;
    OracleAnswer answer;
    /// O b^n before rounding
    Rational scaled;
};

/// Recovers Z with Z / b^n = ustcon_prob(phi, 1, G) from one oracle call on
/// G_q. Throws InternalError when O b^n is not within 1/2 of an integer.
SaturationRun saturation_pipeline(const STGraph &graph, const Probability &phi, const Probability &eta,
                                  const PathOracle &oracle = collapsed_ustcon_oracle);
nlohmann::json to_json(const SaturationRun &run);

// ---------------------------------------------------------------------------
// Gadgets

/// How incident facts of e are copied along an iteration chain.
enum class IterationPolicy {
    /// every incident fact on every copy, except F_L only on u_1 and F_R
    /// only on v_k
    Pinned,
    /// every incident fact on every copy, F_L and F_R included
    IncludeDashed,
    /// copy facts on every copy; extra facts only on u_1 (left) and v_k
    /// (right)
    EndpointsOnly,
};
const char *policy_name(IterationPolicy policy);
IterationPolicy parse_iteration_policy(std::string_view name);

struct IterationOptions {
    IterationPolicy policy = IterationPolicy::Pinned;
    std::optional<Fact> f_left;
    std::optional<Fact> f_right;
};

/// Chain u_1 = u, v_1, u_2, ..., v_k = v with covering copies on (u_i,v_i)
/// and (u_{i+1},v_i). Fresh names come from FreshNames. k = 1 returns M.
Instance iterate_model(const Instance &model, const Edge &edge, unsigned k, const IterationOptions &options = {});

bool is_iterable(const Query &query, const Instance &model, const Edge &edge, unsigned k = 2,
                 const IterationOptions &options = {});

struct FactRole {
    enum class Kind {
        EdgeCopy,
        LeftChoice,
        RightChoice,
        Saturation,
        SharedExtra,
        Vertex,
        GraphEdge,
        Source,
        Terminal,
    };
    FactRole() = default;
    FactRole(Kind k, std::string a = {}, std::string b = {}) : kind(k), first(std::move(a)), second(std::move(b)) {}

    Kind kind = Kind::SharedExtra;
    /// vertex or edge labels the role refers to, when any
    std::string first;
    std::string second;

    friend auto operator<=>(const FactRole &, const FactRole &) = default;
};
std::string to_string(const FactRole &role);

using FactRoleMap = std::map<Fact, FactRole>;
nlohmann::json to_json(const FactRoleMap &roles);

struct Coding {
    Instance instance;
    FactRoleMap roles;
};

/// u_i per U-vertex, v_j per V-vertex, covering copies for E, copy elements
/// replicated N times (named <element>_<n>), other elements shared.
Coding saturated_coding(const CriticalModel &model, const BipartiteGraph &graph, unsigned n);

/// u_x per vertex and u_<a>-<b> per edge, v_<a>-<b>_<x> per incidence, plus
/// the original v as terminal attached to u_s.
Coding iterable_coding(const CriticalModel &model, const STGraph &graph);

struct DissociationOptions {
    /// also copy F_L onto u' and F_R onto v' (the dashed facts)
    bool include_dashed = false;
    std::optional<Fact> f_left;
    std::optional<Fact> f_right;
};

/// dissociate, then u' receives the copy facts of u and v' those of v.
Instance fine_dissociation(const Instance &model, const Edge &edge, const DissociationOptions &options = {});

/// Fine dissociation with k middle elements u_1..u_k between u' and v':
/// covering copies on (u,v'), (u_i,v'), (u_i,v), (u',v); u_i carries the
/// facts of the i-th left copy element other than F_L's.
Instance explosion(const Instance &model, const Edge &edge, unsigned k, const DissociationOptions &options = {});

} // namespace urlab
