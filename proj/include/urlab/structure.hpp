#pragma once

#include "urlab/instance.hpp"
#include "urlab/query.hpp"

#include <json.hpp>

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace urlab {

/// Classification of the incident facts of one edge (u,v).
struct EdgeAnalysis {
    Edge edge;
    std::vector<Fact> covering;
    std::vector<Fact> left_garbage;
    std::vector<Fact> right_garbage;
    /// copy element -> its covering facts with u (resp. v)
    std::map<std::string, std::vector<Fact>> left_copies;
    std::map<std::string, std::vector<Fact>> right_copies;
    std::vector<Fact> left_extras;
    std::vector<Fact> right_extras;
    std::vector<std::string> triangles;
    std::size_t left_incident = 0;
    std::size_t right_incident = 0;

    std::size_t weight() const { return covering.size(); }
    std::size_t extra_weight() const { return left_extras.size() + right_extras.size(); }
    /// (tau, omega): number of left and right copy elements.
    std::pair<std::size_t, std::size_t> lex_weight() const { return {left_copies.size(), right_copies.size()}; }
    bool clean() const { return left_garbage.empty() && right_garbage.empty(); }
    bool non_leaf() const { return left_incident > 0 && right_incident > 0; }
    std::vector<Fact> left_copy_facts() const;
    std::vector<Fact> right_copy_facts() const;
};

EdgeAnalysis analyze_edge(const Instance &instance, const Edge &edge);
nlohmann::json to_json(const EdgeAnalysis &analysis);

/// Weight triple ordered lexicographically: weight, then extra weight, then
/// (tau, omega).
struct EdgeWeights {
    std::size_t theta = 0;
    std::size_t xi = 0;
    std::size_t tau = 0;
    std::size_t omega = 0;

    friend auto operator<=>(const EdgeWeights &, const EdgeWeights &) = default;
};
EdgeWeights weights_of(const EdgeAnalysis &analysis);

/// Fresh elements introduced by a dissociation (empty when none).
struct Dissociation {
    Instance instance;
    enum class Kind { NonEdge, Leaf, NonLeaf } kind = Kind::NonEdge;
    /// non-leaf: u' and v'; leaf: the new names of the leaf elements
    std::string left_fresh;
    std::string right_fresh;
};

/// Non-edge: unchanged. Leaf edge: leaf elements renamed to fresh names.
/// Non-leaf edge: copies on (u',v) and (u,v'), covering facts removed.
Dissociation dissociate_detail(const Instance &instance, const Edge &edge);
Instance dissociate(const Instance &instance, const Edge &edge);

/// Throws PreconditionError if I violates Q or e is not a non-leaf edge.
bool is_tight(const Query &query, const Instance &instance, const Edge &edge);

/// Single-fact removal check; throws when I violates Q.
bool check_subinstance_minimal(const Query &query, const Instance &instance,
                               std::size_t cap = default_max_facts());

struct Cleanified {
    Instance instance;
    Edge edge;
    /// edges dissociated, in order
    std::vector<Edge> dissociated;
};

/// Dissociates every edge carrying garbage facts of e, then merges the
/// dangling copies into e. Throws PreconditionError when e is not tight or
/// when the result loses Q, tightness, cleanness or the weight of e.
Cleanified cleanify(const Query &query, const Instance &instance, const Edge &edge);

struct CriticalModel {
    Instance instance;
    Edge edge;
    Fact f_left;
    Fact f_right;
    EdgeWeights weights;
    std::size_t size_bound = 0;
    std::size_t domain_bound = 0;
};

nlohmann::json to_json(const CriticalModel &model);

/// Smallest left-incident and right-incident facts in canonical order.
std::pair<Fact, Fact> default_choice_facts(const Instance &instance, const Edge &edge);

/// Validates (instance, edge) as a subinstance-minimal model with a clean
/// tight edge and fills
/// weights and default F_L/F_R. Throws PreconditionError otherwise.
CriticalModel make_critical_model(const Query &query, const Instance &instance, const Edge &edge,
                                  std::optional<Fact> f_left = std::nullopt,
                                  std::optional<Fact> f_right = std::nullopt);

struct CriticalSearchOptions {
    std::size_t size_bound = 8;
    std::size_t domain_bound = 8;
    /// distinct candidate images examined before giving up
    std::size_t max_candidates = 500000;
};

struct CriticalSearchReport {
    std::optional<CriticalModel> model;
    std::size_t images = 0;
    std::size_t distinct = 0;
    std::size_t minimal_models = 0;
    std::size_t tight_edges = 0;
    bool truncated = false;
    /// weights of every tight edge met, for consistency checks
    std::vector<EdgeWeights> tight_weights;
    std::size_t size_bound = 0;
    std::size_t domain_bound = 0;
};

/// Exhaustive search over subinstance-minimal models within the bounds (for
/// RPQs: images of path queries over words of bounded length). The reported
/// weights are minima over what was explored.
CriticalSearchReport find_critical_model(const Query &query, const CriticalSearchOptions &options = {});

nlohmann::json to_json(const CriticalSearchReport &report);

} // namespace urlab
