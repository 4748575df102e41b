#include "urlab/error.hpp"
#include "urlab/reductions.hpp"

#include <algorithm>
#include <set>

namespace urlab {

namespace {

struct Sides {
    EdgeAnalysis analysis;
    std::vector<Fact> left;
    std::vector<Fact> right;
    std::set<Fact> left_copy;
    std::set<Fact> right_copy;
    Fact f_left;
    Fact f_right;
};

Sides sides_of(const Instance &model, const Edge &edge, const std::optional<Fact> &f_left,
               const std::optional<Fact> &f_right) {
    if (!is_edge(model, edge) || !is_non_leaf(model, edge))
        throw PreconditionError(to_string(edge) + " is not a non-leaf edge");
    Sides s;
    s.analysis = analyze_edge(model, edge);
    s.left = left_incident_facts(model, edge);
    s.right = right_incident_facts(model, edge);
    for (const auto &f : s.analysis.left_copy_facts())
        s.left_copy.insert(f);
    for (const auto &f : s.analysis.right_copy_facts())
        s.right_copy.insert(f);
    auto [dl, dr] = default_choice_facts(model, edge);
    s.f_left = f_left.value_or(dl);
    s.f_right = f_right.value_or(dr);
    if (std::find(s.left.begin(), s.left.end(), s.f_left) == s.left.end())
        throw PreconditionError(to_string(s.f_left) + " is not left-incident to " + to_string(edge));
    if (std::find(s.right.begin(), s.right.end(), s.f_right) == s.right.end())
        throw PreconditionError(to_string(s.f_right) + " is not right-incident to " + to_string(edge));
    return s;
}

// Facts of the model touching neither endpoint.
std::vector<Fact> untouched(const Instance &model, const Edge &edge) {
    std::vector<Fact> out;
    for (const auto &f : model.facts())
        if (!f.uses(edge.left) && !f.uses(edge.right))
            out.push_back(f);
    return out;
}

void claim_name(std::set<std::string> &names, const std::string &name) {
    if (!is_identifier(name))
        throw PreconditionError("gadget element name '" + name + "' is not an identifier");
    if (!names.insert(name).second)
        throw PreconditionError("gadget element name '" + name + "' clashes with another element");
}

Fact rename_all(const Fact &f, const std::map<std::string, std::string> &mapping) {
    Fact out = f;
    if (auto it = mapping.find(f.subject); it != mapping.end())
        out.subject = it->second;
    if (auto it = mapping.find(f.object); it != mapping.end())
        out.object = it->second;
    return out;
}

class RoleBuilder {
public:
    void add(const Fact &fact, FactRole role) {
        auto [it, inserted] = roles_.emplace(fact, role);
        if (!inserted && it->second != role)
            throw InternalError("fact " + to_string(fact) + " got two roles: " + to_string(it->second) + ", " +
                                to_string(role));
    }
    Coding finish() {
        std::vector<Fact> facts;
        for (const auto &[f, r] : roles_)
            facts.push_back(f);
        return {Instance(std::move(facts)), std::move(roles_)};
    }

private:
    FactRoleMap roles_;
};

} // namespace

const char *policy_name(IterationPolicy policy) {
    switch (policy) {
    case IterationPolicy::Pinned:
        return "pinned";
    case IterationPolicy::IncludeDashed:
        return "include-dashed";
    case IterationPolicy::EndpointsOnly:
        return "endpoints-only";
    }
    return "?";
}

IterationPolicy parse_iteration_policy(std::string_view name) {
    if (name == "pinned")
        return IterationPolicy::Pinned;
    if (name == "include-dashed")
        return IterationPolicy::IncludeDashed;
    if (name == "endpoints-only")
        return IterationPolicy::EndpointsOnly;
    throw PreconditionError("unknown iteration policy '" + std::string(name) +
                            "' (pinned, include-dashed, endpoints-only)");
}

std::string to_string(const FactRole &role) {
    switch (role.kind) {
    case FactRole::Kind::EdgeCopy:
        return "edge-copy(" + role.first + "," + role.second + ")";
    case FactRole::Kind::LeftChoice:
        return "left-choice(" + role.first + ")";
    case FactRole::Kind::RightChoice:
        return "right-choice(" + role.first + ")";
    case FactRole::Kind::Saturation:
        return "saturation";
    case FactRole::Kind::SharedExtra:
        return "shared-extra";
    case FactRole::Kind::Vertex:
        return "vertex(" + role.first + ")";
    case FactRole::Kind::GraphEdge:
        return "graph-edge(" + role.first + "," + role.second + ")";
    case FactRole::Kind::Source:
        return "source";
    case FactRole::Kind::Terminal:
        return "terminal";
    }
    return "?";
}

nlohmann::json to_json(const FactRoleMap &roles) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto &[f, r] : roles)
        out[to_string(f)] = to_string(r);
    return out;
}

// ---------------------------------------------------------------------------

Instance iterate_model(const Instance &model, const Edge &edge, unsigned k, const IterationOptions &options) {
    if (k == 0)
        throw PreconditionError("iteration needs k >= 1");
    Sides s = sides_of(model, edge, options.f_left, options.f_right);
    if (k == 1)
        return model;
    FreshNames fresh(model);
    std::vector<std::string> us{edge.left}, vs;
    for (unsigned i = 2; i <= k; ++i)
        us.push_back(fresh.next(edge.left));
    for (unsigned i = 1; i < k; ++i)
        vs.push_back(fresh.next(edge.right));
    vs.push_back(edge.right);

    auto on_copy = [&](bool is_copy, bool pinned, bool at_end) {
        switch (options.policy) {
        case IterationPolicy::Pinned:
            return !pinned || at_end;
        case IterationPolicy::IncludeDashed:
            return true;
        case IterationPolicy::EndpointsOnly:
            return is_copy || at_end;
        }
        return true;
    };

    std::vector<Fact> facts = untouched(model, edge);
    for (unsigned i = 0; i < k; ++i) {
        for (const auto &f : s.analysis.covering) {
            facts.push_back(f.renamed(edge.left, us[i]).renamed(edge.right, vs[i]));
            if (i + 1 < k)
                facts.push_back(f.renamed(edge.left, us[i + 1]).renamed(edge.right, vs[i]));
        }
        for (const auto &f : s.left)
            if (on_copy(s.left_copy.contains(f), f == s.f_left, i == 0))
                facts.push_back(f.renamed(edge.left, us[i]));
        for (const auto &f : s.right)
            if (on_copy(s.right_copy.contains(f), f == s.f_right, i + 1 == k))
                facts.push_back(f.renamed(edge.right, vs[i]));
    }
    return Instance(std::move(facts));
}

bool is_iterable(const Query &query, const Instance &model, const Edge &edge, unsigned k,
                 const IterationOptions &options) {
    if (!evaluate(query, model))
        throw PreconditionError("is_iterable: the model does not satisfy the query");
    return evaluate(query, iterate_model(model, edge, k, options));
}

// ---------------------------------------------------------------------------

Coding saturated_coding(const CriticalModel &cm, const BipartiteGraph &graph, unsigned n) {
    if (n == 0)
        throw PreconditionError("saturated coding needs N >= 1");
    graph.validate();
    const Instance &model = cm.instance;
    const Edge &e = cm.edge;
    Sides s = sides_of(model, e, cm.f_left, cm.f_right);

    std::set<std::string> copy_elements;
    for (const auto &[x, facts] : s.analysis.left_copies)
        copy_elements.insert(x);
    for (const auto &[x, facts] : s.analysis.right_copies)
        copy_elements.insert(x);

    std::set<std::string> names;
    for (const auto &x : model.domain())
        if (x != e.left && x != e.right && !copy_elements.contains(x))
            claim_name(names, x);
    std::map<std::string, std::string> u_name, v_name;
    for (const auto &i : graph.U)
        claim_name(names, u_name[i] = e.left + "_" + i);
    for (const auto &j : graph.V)
        claim_name(names, v_name[j] = e.right + "_" + j);
    // replica n of every copy element
    std::vector<std::map<std::string, std::string>> replica(n);
    for (unsigned r = 0; r < n; ++r)
        for (const auto &c : copy_elements)
            claim_name(names, replica[r][c] = c + "_" + std::to_string(r + 1));

    auto touches_copy = [&](const Fact &f) {
        return copy_elements.contains(f.subject) || copy_elements.contains(f.object);
    };

    RoleBuilder out;
    for (const auto &f : s.analysis.covering)
        for (const auto &[i, j] : graph.E)
            out.add(f.renamed(e.left, u_name[i]).renamed(e.right, v_name[j]),
                    {FactRole::Kind::EdgeCopy, i, j});
    auto place_side = [&](const std::vector<Fact> &incident, const std::string &anchor,
                          const std::vector<std::string> &labels, const std::map<std::string, std::string> &names_of,
                          const Fact &choice, FactRole::Kind choice_kind) {
        for (const auto &f : incident)
            for (const auto &label : labels) {
                FactRole role = f == choice ? FactRole{choice_kind, label, {}} : FactRole{FactRole::Kind::Saturation};
                Fact placed = f.renamed(anchor, names_of.at(label));
                if (touches_copy(f)) {
                    for (unsigned r = 0; r < n; ++r)
                        out.add(rename_all(placed, replica[r]), role);
                } else {
                    out.add(placed, role);
                }
            }
    };
    place_side(s.left, e.left, graph.U, u_name, s.f_left, FactRole::Kind::LeftChoice);
    place_side(s.right, e.right, graph.V, v_name, s.f_right, FactRole::Kind::RightChoice);
    for (const auto &f : untouched(model, e)) {
        if (touches_copy(f)) {
            for (unsigned r = 0; r < n; ++r)
                out.add(rename_all(f, replica[r]), {FactRole::Kind::Saturation});
        } else {
            out.add(f, {FactRole::Kind::SharedExtra});
        }
    }
    return out.finish();
}

Coding iterable_coding(const CriticalModel &cm, const STGraph &graph) {
    const Instance &model = cm.instance;
    const Edge &e = cm.edge;
    Sides s = sides_of(model, e, cm.f_left, cm.f_right);

    std::set<std::string> names;
    for (const auto &x : model.domain())
        if (x != e.left)
            claim_name(names, x);
    std::map<std::string, std::string> u_vertex;
    for (const auto &x : graph.vertices)
        claim_name(names, u_vertex[x] = e.left + "_" + x);
    struct Incidence {
        std::string label_a, label_b, u_edge, v_a, v_b;
    };
    std::vector<Incidence> incidences;
    for (const auto &[a, b] : graph.edges) {
        const std::string label = a + "-" + b;
        Incidence inc{a, b, e.left + "_" + label, e.right + "_" + label + "_" + a, e.right + "_" + label + "_" + b};
        claim_name(names, inc.u_edge);
        claim_name(names, inc.v_a);
        claim_name(names, inc.v_b);
        incidences.push_back(std::move(inc));
    }

    RoleBuilder out;
    auto covering_on = [&](const std::string &u, const std::string &v, const FactRole &role) {
        for (const auto &f : s.analysis.covering)
            out.add(f.renamed(e.left, u).renamed(e.right, v), role);
    };
    auto left_on = [&](const std::string &u, const FactRole &role) {
        for (const auto &f : s.left)
            if (f != s.f_left && s.left_copy.contains(f))
                out.add(f.renamed(e.left, u), role);
    };
    auto right_on = [&](const std::string &v, const FactRole &role) {
        for (const auto &f : s.right)
            if (f != s.f_right && s.right_copy.contains(f))
                out.add(f.renamed(e.right, v), role);
    };

    for (const auto &inc : incidences) {
        FactRole role{FactRole::Kind::GraphEdge, inc.label_a, inc.label_b};
        covering_on(u_vertex[inc.label_a], inc.v_a, role);
        covering_on(u_vertex[inc.label_b], inc.v_b, role);
        covering_on(inc.u_edge, inc.v_a, role);
        covering_on(inc.u_edge, inc.v_b, role);
        left_on(inc.u_edge, role);
        right_on(inc.v_a, role);
        right_on(inc.v_b, role);
    }
    for (const auto &x : graph.vertices) {
        if (x == graph.r) {
            for (const auto &f : s.left)
                out.add(f.renamed(e.left, u_vertex[x]), {FactRole::Kind::Source});
        } else {
            left_on(u_vertex[x], {FactRole::Kind::Vertex, x, {}});
        }
    }
    covering_on(u_vertex[graph.s], e.right, {FactRole::Kind::Terminal});
    for (const auto &f : s.right)
        out.add(f, {FactRole::Kind::Terminal});
    for (const auto &f : untouched(model, e))
        out.add(f, {FactRole::Kind::SharedExtra});
    return out.finish();
}

// ---------------------------------------------------------------------------

Instance fine_dissociation(const Instance &model, const Edge &edge, const DissociationOptions &options) {
    Sides s = sides_of(model, edge, options.f_left, options.f_right);
    auto d = dissociate_detail(model, edge);
    std::vector<Fact> extra;
    for (const auto &f : s.left)
        if ((s.left_copy.contains(f) && f != s.f_left) || (options.include_dashed && f == s.f_left))
            extra.push_back(f.renamed(edge.left, d.left_fresh));
    for (const auto &f : s.right)
        if ((s.right_copy.contains(f) && f != s.f_right) || (options.include_dashed && f == s.f_right))
            extra.push_back(f.renamed(edge.right, d.right_fresh));
    return d.instance.with(extra);
}

Instance explosion(const Instance &model, const Edge &edge, unsigned k, const DissociationOptions &options) {
    Sides s = sides_of(model, edge, options.f_left, options.f_right);
    std::vector<std::string> eligible;
    for (const auto &[x, facts] : s.analysis.left_copies)
        if (std::find(facts.begin(), facts.end(), s.f_left) == facts.end())
            eligible.push_back(x);
    if (k > eligible.size())
        throw PreconditionError("explosion with " + std::to_string(k) + " middles needs as many left copy elements (" +
                                std::to_string(eligible.size()) + " available)");
    Instance fine = fine_dissociation(model, edge, options);
    if (k == 0)
        return fine;
    FreshNames fresh(fine);
    // v' is the first fresh name of v in the fine dissociation
    FreshNames base(model);
    const std::string v_prime = base.next(edge.right);
    std::vector<Fact> extra;
    for (unsigned i = 0; i < k; ++i) {
        const std::string middle = fresh.next(edge.left);
        for (const auto &f : s.analysis.covering) {
            extra.push_back(f.renamed(edge.left, middle).renamed(edge.right, v_prime));
            extra.push_back(f.renamed(edge.left, middle));
        }
        for (const auto &f : s.analysis.left_copies.at(eligible[i]))
            extra.push_back(f.renamed(edge.left, middle));
    }
    return fine.with(extra);
}

} // namespace urlab
