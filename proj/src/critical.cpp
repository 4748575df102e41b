#include "urlab/error.hpp"
#include "urlab/structure.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace urlab {

namespace {

// Conjunctive bodies whose homomorphic images cover the minimal models.
std::vector<Instance> candidate_bodies(const Query &query, std::size_t size_bound) {
    if (query.is_ucq())
        return query.ucq().disjuncts;
    const RPQ &r = query.rpq();
    std::size_t tags = (r.start_tag ? 1 : 0) + (r.end_tag ? 1 : 0);
    std::vector<Instance> out;
    if (size_bound < tags)
        return out;
    for (const auto &word : rpq_words(r, size_bound - tags)) {
        if (word.empty() && tags == 0)
            continue;
        const std::size_t k = word.size();
        const std::uint64_t directions = r.two_way ? (std::uint64_t{1} << k) : 1;
        for (std::uint64_t dir = 0; dir < directions; ++dir) {
            std::vector<Fact> atoms;
            auto var = [](std::size_t i) { return "x" + std::to_string(i); };
            for (std::size_t i = 0; i < k; ++i) {
                if ((dir >> i) & 1U)
                    atoms.push_back({word[i], var(i + 1), var(i)});
                else
                    atoms.push_back({word[i], var(i), var(i + 1)});
            }
            if (r.start_tag)
                atoms.push_back({*r.start_tag, var(0), var(0)});
            if (r.end_tag)
                atoms.push_back({*r.end_tag, var(k), var(k)});
            out.emplace_back(std::move(atoms));
        }
    }
    return out;
}

// Calls visit(block_of) for every set partition of n items with at most
// max_blocks blocks, as restricted growth strings.
void for_each_partition(std::size_t n, std::size_t max_blocks, const std::function<bool(const std::vector<int> &)> &visit) {
    std::vector<int> block(n, 0);
    std::function<bool(std::size_t, int)> rec = [&](std::size_t i, int used) -> bool {
        if (i == n)
            return visit(block);
        for (int b = 0; b <= used && b < static_cast<int>(max_blocks); ++b) {
            block[i] = b;
            if (!rec(i + 1, std::max(used, b + 1)))
                return false;
        }
        return true;
    };
    if (n == 0) {
        visit(block);
        return;
    }
    rec(0, 0);
}

struct Best {
    EdgeWeights weights;
    Instance instance;
    Edge edge;
    std::string canonical;
    std::string edge_key;
    bool found = false;
};

// Greedy removal of facts that are neither covering nor incident to e,
// keeping the query satisfied.
Instance shrink_keeping_edge(const Query &query, Instance instance, const Edge &edge) {
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto &f : instance.facts()) {
            if (f.uses(edge.left) || f.uses(edge.right))
                continue;
            Instance smaller = instance.without(std::span<const Fact>(&f, 1));
            if (evaluate(query, smaller)) {
                instance = std::move(smaller);
                changed = true;
                break;
            }
        }
    }
    return instance;
}

} // namespace

CriticalSearchReport find_critical_model(const Query &query, const CriticalSearchOptions &options) {
    CriticalSearchReport report;
    report.size_bound = options.size_bound;
    report.domain_bound = options.domain_bound;

    std::unordered_map<std::uint64_t, std::vector<std::pair<Instance, std::string>>> seen;
    Best best;

    auto consider = [&](const Instance &image) -> bool {
        ++report.images;
        if (image.empty() || image.size() > options.size_bound)
            return true;
        auto &bucket = seen[invariant_hash(image)];
        if (!bucket.empty()) {
            std::string canon = canonical_form(image);
            for (auto &[rep, rep_canon] : bucket) {
                if (rep_canon.empty())
                    rep_canon = canonical_form(rep);
                if (rep_canon == canon)
                    return true;
            }
            bucket.emplace_back(image, std::move(canon));
        } else {
            bucket.emplace_back(image, std::string());
        }
        if (++report.distinct > options.max_candidates) {
            report.truncated = true;
            return false;
        }
        if (!check_subinstance_minimal(query, image, kHardMaxFacts))
            return true;
        ++report.minimal_models;
        for (const auto &entry : edges_of(image, true)) {
            if (!entry.non_leaf)
                continue;
            if (evaluate(query, dissociate(image, entry.edge)))
                continue;
            ++report.tight_edges;
            EdgeWeights w = weights_of(analyze_edge(image, entry.edge));
            report.tight_weights.push_back(w);
            if (best.found && w > best.weights)
                continue;
            auto labels = canonical_labeling(image);
            std::string canon = canonical_form(image);
            std::string key = labels.at(entry.edge.left) + "," + labels.at(entry.edge.right);
            if (best.found && w == best.weights &&
                std::tie(canon, key) >= std::tie(best.canonical, best.edge_key))
                continue;
            best.weights = w;
            best.instance = image.renamed(labels);
            best.edge = {labels.at(entry.edge.left), labels.at(entry.edge.right)};
            best.canonical = std::move(canon);
            best.edge_key = std::move(key);
            best.found = true;
        }
        return true;
    };

    for (const auto &body : candidate_bodies(query, options.size_bound)) {
        auto vars = body.domain();
        bool keep_going = true;
        for_each_partition(vars.size(), options.domain_bound, [&](const std::vector<int> &block) {
            std::map<std::string, std::string> renaming;
            for (std::size_t i = 0; i < vars.size(); ++i)
                renaming[vars[i]] = "e" + std::to_string(block[i]);
            keep_going = consider(body.renamed(renaming));
            return keep_going;
        });
        if (!keep_going)
            break;
    }
    if (!best.found)
        return report;

    Instance model = best.instance;
    Edge edge = best.edge;
    if (!analyze_edge(model, edge).clean()) {
        auto cleaned = cleanify(query, model, edge);
        model = shrink_keeping_edge(query, cleaned.instance, edge);
        if (weights_of(analyze_edge(model, edge)) != best.weights)
            throw InternalError("critical search: cleaning changed the weights of the edge");
    }
    CriticalModel cm = make_critical_model(query, model, edge);
    cm.size_bound = options.size_bound;
    cm.domain_bound = options.domain_bound;
    report.model = std::move(cm);
    return report;
}

nlohmann::json to_json(const CriticalSearchReport &r) {
    nlohmann::json out = {
        {"found", r.model.has_value()},
        {"images", r.images},
        {"distinct", r.distinct},
        {"minimal_models", r.minimal_models},
        {"tight_edges", r.tight_edges},
        {"truncated", r.truncated},
        {"size_bound", r.size_bound},
        {"domain_bound", r.domain_bound},
    };
    if (r.model)
        out["model"] = to_json(*r.model);
    return out;
}

} // namespace urlab
