#include "urlab/structure.hpp"

#include "urlab/error.hpp"

#include <algorithm>
#include <set>

namespace urlab {

namespace {

// Covering facts of (from, x) with x renamed to `to`, sorted.
std::vector<Fact> renamed_covering(const Instance &instance, const std::string &anchor, const std::string &x,
                                   const std::string &to) {
    std::vector<Fact> out;
    for (const auto &f : covering_facts(instance, {anchor, x}))
        out.push_back(f.renamed(x, to));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool strict_subset(const std::vector<Fact> &a, const std::vector<Fact> &b) {
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Classifies the incident facts on one side. `anchor` is the endpoint the
// facts use, `other` the opposite endpoint.
void classify_side(const Instance &instance, const std::string &anchor, const std::string &other,
                   const std::vector<Fact> &covering, const std::set<std::string> &triangles,
                   std::vector<Fact> &garbage, std::map<std::string, std::vector<Fact>> &copies,
                   std::vector<Fact> &extras, std::size_t &incident) {
    std::map<std::string, std::vector<Fact>> by_neighbour;
    for (const auto &f : instance.facts()) {
        if (!f.uses(anchor) || f.uses(other))
            continue;
        ++incident;
        if (f.is_unary()) {
            extras.push_back(f);
            continue;
        }
        by_neighbour[f.subject == anchor ? f.object : f.subject].push_back(f);
    }
    for (auto &[x, facts] : by_neighbour) {
        auto image = renamed_covering(instance, anchor, x, other);
        if (strict_subset(image, covering)) {
            garbage.insert(garbage.end(), facts.begin(), facts.end());
        } else if (image == covering && !triangles.contains(x)) {
            copies[x] = facts;
        } else {
            extras.insert(extras.end(), facts.begin(), facts.end());
        }
    }
    std::sort(garbage.begin(), garbage.end());
    std::sort(extras.begin(), extras.end());
}

nlohmann::json facts_json(const std::vector<Fact> &facts) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &f : facts)
        out.push_back(to_string(f));
    return out;
}

} // namespace

std::vector<Fact> EdgeAnalysis::left_copy_facts() const {
    std::vector<Fact> out;
    for (const auto &[x, facts] : left_copies)
        out.insert(out.end(), facts.begin(), facts.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Fact> EdgeAnalysis::right_copy_facts() const {
    std::vector<Fact> out;
    for (const auto &[x, facts] : right_copies)
        out.insert(out.end(), facts.begin(), facts.end());
    std::sort(out.begin(), out.end());
    return out;
}

EdgeAnalysis analyze_edge(const Instance &instance, const Edge &edge) {
    if (!is_edge(instance, edge))
        throw PreconditionError(to_string(edge) + " is not an edge of the instance");
    EdgeAnalysis a;
    a.edge = edge;
    a.covering = covering_facts(instance, edge);
    std::set<std::string> left_nb, right_nb;
    for (const auto &f : instance.facts()) {
        if (f.is_unary())
            continue;
        if (f.uses(edge.left) && !f.uses(edge.right))
            left_nb.insert(f.subject == edge.left ? f.object : f.subject);
        if (f.uses(edge.right) && !f.uses(edge.left))
            right_nb.insert(f.subject == edge.right ? f.object : f.subject);
    }
    std::set<std::string> triangles;
    std::set_intersection(left_nb.begin(), left_nb.end(), right_nb.begin(), right_nb.end(),
                          std::inserter(triangles, triangles.end()));
    a.triangles.assign(triangles.begin(), triangles.end());
    classify_side(instance, edge.left, edge.right, a.covering, triangles, a.left_garbage, a.left_copies,
                  a.left_extras, a.left_incident);
    classify_side(instance, edge.right, edge.left, a.covering, triangles, a.right_garbage, a.right_copies,
                  a.right_extras, a.right_incident);
    return a;
}

nlohmann::json to_json(const EdgeAnalysis &a) {
    nlohmann::json left_copies = nlohmann::json::object();
    for (const auto &[x, facts] : a.left_copies)
        left_copies[x] = facts_json(facts);
    nlohmann::json right_copies = nlohmann::json::object();
    for (const auto &[x, facts] : a.right_copies)
        right_copies[x] = facts_json(facts);
    auto lex = a.lex_weight();
    return {
        {"edge", {a.edge.left, a.edge.right}},
        {"covering", facts_json(a.covering)},
        {"weight", a.weight()},
        {"non_leaf", a.non_leaf()},
        {"clean", a.clean()},
        {"left_garbage", facts_json(a.left_garbage)},
        {"right_garbage", facts_json(a.right_garbage)},
        {"left_copies", left_copies},
        {"right_copies", right_copies},
        {"left_extras", facts_json(a.left_extras)},
        {"right_extras", facts_json(a.right_extras)},
        {"triangles", a.triangles},
        {"extra_weight", a.extra_weight()},
        {"lex_weight", {lex.first, lex.second}},
    };
}

EdgeWeights weights_of(const EdgeAnalysis &a) {
    auto [tau, omega] = a.lex_weight();
    return {a.weight(), a.extra_weight(), tau, omega};
}

// ---------------------------------------------------------------------------

Dissociation dissociate_detail(const Instance &instance, const Edge &edge) {
    if (edge.left == edge.right)
        throw PreconditionError("cannot dissociate " + to_string(edge) + ": equal elements");
    if (!instance.has_element(edge.left) || !instance.has_element(edge.right))
        throw PreconditionError("cannot dissociate " + to_string(edge) + ": element not in the domain");
    Dissociation out;
    if (!is_edge(instance, edge)) {
        out.instance = instance;
        return out;
    }
    FreshNames fresh(instance);
    const bool left_leaf = left_incident_facts(instance, edge).empty();
    const bool right_leaf = right_incident_facts(instance, edge).empty();
    if (left_leaf || right_leaf) {
        out.kind = Dissociation::Kind::Leaf;
        std::map<std::string, std::string> renaming;
        if (left_leaf) {
            out.left_fresh = fresh.next(edge.left);
            renaming[edge.left] = out.left_fresh;
        }
        if (right_leaf) {
            out.right_fresh = fresh.next(edge.right);
            renaming[edge.right] = out.right_fresh;
        }
        out.instance = instance.renamed(renaming);
        return out;
    }
    out.kind = Dissociation::Kind::NonLeaf;
    out.left_fresh = fresh.next(edge.left);
    out.right_fresh = fresh.next(edge.right);
    auto covering = covering_facts(instance, edge);
    Instance step = copy_edge(instance, edge, {out.left_fresh, edge.right});
    step = copy_edge(step, edge, {edge.left, out.right_fresh});
    out.instance = step.without(covering);
    return out;
}

Instance dissociate(const Instance &instance, const Edge &edge) { return dissociate_detail(instance, edge).instance; }

bool is_tight(const Query &query, const Instance &instance, const Edge &edge) {
    if (!evaluate(query, instance))
        throw PreconditionError("is_tight: the instance does not satisfy the query");
    if (!is_non_leaf(instance, edge))
        throw PreconditionError("is_tight: " + to_string(edge) + " is not a non-leaf edge");
    return !evaluate(query, dissociate(instance, edge));
}

bool check_subinstance_minimal(const Query &query, const Instance &instance, std::size_t cap) {
    check_cap("minimality check", instance.size(), cap);
    Evaluator eval(query, instance);
    if (!eval.holds_all())
        throw PreconditionError("check_subinstance_minimal: the instance does not satisfy the query");
    std::vector<std::uint64_t> words((instance.size() + 63) / 64 + 1, ~std::uint64_t{0});
    for (std::size_t i = 0; i < instance.size(); ++i) {
        words[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
        bool still = eval.holds(ActiveFacts(words));
        words[i >> 6] |= std::uint64_t{1} << (i & 63);
        if (still)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

Cleanified cleanify(const Query &query, const Instance &instance, const Edge &edge) {
    if (!is_tight(query, instance, edge))
        throw PreconditionError("cleanify: " + to_string(edge) + " is not tight");
    const EdgeAnalysis before = analyze_edge(instance, edge);
    Cleanified out{instance, edge, {}};
    if (before.clean())
        return out;

    std::set<std::string> left_x, right_y;
    for (const auto &f : before.left_garbage)
        left_x.insert(f.subject == edge.left ? f.object : f.subject);
    for (const auto &f : before.right_garbage)
        right_y.insert(f.subject == edge.right ? f.object : f.subject);

    Instance current = instance;
    std::map<std::string, std::string> merge;
    for (const auto &x : left_x) {
        Edge g{edge.left, x};
        auto d = dissociate_detail(current, g);
        out.dissociated.push_back(g);
        current = d.instance;
        // the copy left hanging on u is the fresh x-side element
        if (!d.right_fresh.empty())
            merge[d.right_fresh] = edge.right;
    }
    for (const auto &y : right_y) {
        Edge g{y, edge.right};
        auto d = dissociate_detail(current, g);
        out.dissociated.push_back(g);
        current = d.instance;
        if (!d.left_fresh.empty())
            merge[d.left_fresh] = edge.left;
    }
    current = current.renamed(merge);

    if (!evaluate(query, current))
        throw PreconditionError("cleanify: dissociating the garbage edges broke the query");
    const EdgeAnalysis after = analyze_edge(current, edge);
    if (!after.clean() || after.weight() != before.weight())
        throw PreconditionError("cleanify: merged instance is not clean with the same weight");
    if (!after.non_leaf() || !is_tight(query, current, edge))
        throw PreconditionError("cleanify: edge is no longer tight after merging");
    out.instance = std::move(current);
    return out;
}

// ---------------------------------------------------------------------------

std::pair<Fact, Fact> default_choice_facts(const Instance &instance, const Edge &edge) {
    auto left = left_incident_facts(instance, edge);
    auto right = right_incident_facts(instance, edge);
    if (left.empty() || right.empty())
        throw PreconditionError(to_string(edge) + " is a leaf edge");
    return {*std::min_element(left.begin(), left.end()), *std::min_element(right.begin(), right.end())};
}

CriticalModel make_critical_model(const Query &query, const Instance &instance, const Edge &edge,
                                  std::optional<Fact> f_left, std::optional<Fact> f_right) {
    if (!is_tight(query, instance, edge))
        throw PreconditionError(to_string(edge) + " is not tight for the query");
    if (!check_subinstance_minimal(query, instance))
        throw PreconditionError("the model is not subinstance-minimal");
    auto a = analyze_edge(instance, edge);
    if (!a.clean())
        throw PreconditionError(to_string(edge) + " is not clean");
    auto [dl, dr] = default_choice_facts(instance, edge);
    CriticalModel cm;
    cm.instance = instance;
    cm.edge = edge;
    cm.f_left = f_left.value_or(dl);
    cm.f_right = f_right.value_or(dr);
    auto left = left_incident_facts(instance, edge);
    auto right = right_incident_facts(instance, edge);
    if (std::find(left.begin(), left.end(), cm.f_left) == left.end())
        throw PreconditionError(to_string(cm.f_left) + " is not left-incident to " + to_string(edge));
    if (std::find(right.begin(), right.end(), cm.f_right) == right.end())
        throw PreconditionError(to_string(cm.f_right) + " is not right-incident to " + to_string(edge));
    cm.weights = weights_of(a);
    cm.size_bound = instance.size();
    cm.domain_bound = instance.domain().size();
    return cm;
}

nlohmann::json to_json(const CriticalModel &m) {
    return {
        {"instance", serialize_instance(m.instance)},
        {"edge", {m.edge.left, m.edge.right}},
        {"f_left", to_string(m.f_left)},
        {"f_right", to_string(m.f_right)},
        {"theta", m.weights.theta},
        {"xi", m.weights.xi},
        {"lambda", {m.weights.tau, m.weights.omega}},
        {"size_bound", m.size_bound},
        {"domain_bound", m.domain_bound},
    };
}

} // namespace urlab
