#include "urlab/homomorphism.hpp"

#include <algorithm>

namespace urlab {

namespace {

std::uint64_t pack(int relation, int subject, int object) {
    return (static_cast<std::uint64_t>(relation) << 42) | (static_cast<std::uint64_t>(subject) << 21) |
           static_cast<std::uint64_t>(object);
}

} // namespace

TargetIndex::TargetIndex(const Instance &instance) : elements_(instance.domain()) {
    for (const auto &f : instance.facts())
        relation_ids_.emplace(f.relation, 0);
    int next = 0;
    for (auto &[name, id] : relation_ids_)
        id = next++;
    const std::size_t slots = relation_ids_.size() * elements_.size();
    out_.resize(slots);
    in_.resize(slots);
    int i = 0;
    for (const auto &f : instance.facts()) {
        IndexedFact x{relation_ids_.at(f.relation), element_id(f.subject), element_id(f.object)};
        facts_.push_back(x);
        lookup_.emplace(pack(x.relation, x.subject, x.object), i);
        const std::size_t base = static_cast<std::size_t>(x.relation) * elements_.size();
        out_[base + static_cast<std::size_t>(x.subject)].push_back({x.object, i});
        in_[base + static_cast<std::size_t>(x.object)].push_back({x.subject, i});
        ++i;
    }
}

int TargetIndex::element_id(const std::string &name) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), name);
    if (it == elements_.end() || *it != name)
        return -1;
    return static_cast<int>(it - elements_.begin());
}

int TargetIndex::relation_id(const std::string &name) const {
    auto it = relation_ids_.find(name);
    return it == relation_ids_.end() ? -1 : it->second;
}

int TargetIndex::lookup(int relation, int subject, int object) const {
    auto it = lookup_.find(pack(relation, subject, object));
    return it == lookup_.end() ? -1 : it->second;
}

std::span<const TargetIndex::Arc> TargetIndex::out_arcs(int relation, int subject) const {
    return out_[static_cast<std::size_t>(relation) * elements_.size() + static_cast<std::size_t>(subject)];
}

std::span<const TargetIndex::Arc> TargetIndex::in_arcs(int relation, int object) const {
    return in_[static_cast<std::size_t>(relation) * elements_.size() + static_cast<std::size_t>(object)];
}

// ---------------------------------------------------------------------------

Pattern::Pattern(const Instance &source, const TargetIndex &target)
    : target_(&target), variables_(source.domain()) {
    auto var = [&](const std::string &x) {
        return static_cast<int>(std::lower_bound(variables_.begin(), variables_.end(), x) - variables_.begin());
    };
    for (const auto &f : source.facts()) {
        int rel = target.relation_id(f.relation);
        if (rel < 0)
            impossible_ = true;
        atoms_.push_back({rel, var(f.subject), var(f.object)});
    }
    const std::size_t n = variables_.size();
    std::vector<int> degree(n, 0);
    for (const auto &a : atoms_) {
        ++degree[static_cast<std::size_t>(a.subject)];
        if (a.object != a.subject)
            ++degree[static_cast<std::size_t>(a.object)];
    }
    std::vector<bool> placed(n, false);
    std::vector<int> position(n, -1);
    for (std::size_t step = 0; step < n; ++step) {
        int best = -1;
        int best_links = -1;
        for (std::size_t v = 0; v < n; ++v) {
            if (placed[v])
                continue;
            int links = 0;
            for (const auto &a : atoms_) {
                if (a.subject == static_cast<int>(v) && a.object != a.subject && placed[static_cast<std::size_t>(a.object)])
                    ++links;
                if (a.object == static_cast<int>(v) && a.object != a.subject && placed[static_cast<std::size_t>(a.subject)])
                    ++links;
            }
            if (links > best_links || (links == best_links && degree[v] > degree[static_cast<std::size_t>(best)])) {
                best = static_cast<int>(v);
                best_links = links;
            }
        }
        placed[static_cast<std::size_t>(best)] = true;
        position[static_cast<std::size_t>(best)] = static_cast<int>(step);
        order_.push_back(best);
    }
    checks_.assign(n, {});
    anchor_.assign(n, -1);
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const auto &a = atoms_[i];
        int last = std::max(position[static_cast<std::size_t>(a.subject)], position[static_cast<std::size_t>(a.object)]);
        checks_[static_cast<std::size_t>(last)].push_back(static_cast<int>(i));
    }
    // Anchor: a binary atom linking the variable to an earlier one, else a
    // unary atom on it.
    for (std::size_t d = 0; d < n; ++d) {
        for (int i : checks_[d]) {
            const auto &a = atoms_[static_cast<std::size_t>(i)];
            if (a.subject != a.object) {
                anchor_[d] = i;
                break;
            }
        }
        if (anchor_[d] < 0 && !checks_[d].empty())
            anchor_[d] = checks_[d].front();
    }
}

bool Pattern::matches(ActiveFacts active) const {
    std::vector<int> assignment(variables_.size(), -1);
    return search(active, assignment);
}

std::optional<Homomorphism> Pattern::find(ActiveFacts active) const {
    std::vector<int> assignment(variables_.size(), -1);
    if (!search(active, assignment))
        return std::nullopt;
    Homomorphism h;
    for (std::size_t v = 0; v < variables_.size(); ++v)
        h[variables_[v]] = target_->element(assignment[v]);
    return h;
}

bool Pattern::search(ActiveFacts active, std::vector<int> &assignment) const {
    if (impossible_)
        return false;
    return extend(active, assignment, 0);
}

bool Pattern::extend(ActiveFacts active, std::vector<int> &assignment, std::size_t depth) const {
    if (depth == order_.size())
        return true;
    const int var = order_[depth];
    auto consistent = [&]() {
        for (int i : checks_[depth]) {
            const auto &a = atoms_[static_cast<std::size_t>(i)];
            int f = target_->lookup(a.relation, assignment[static_cast<std::size_t>(a.subject)],
                                    assignment[static_cast<std::size_t>(a.object)]);
            if (f < 0 || !is_active(active, f))
                return false;
        }
        return true;
    };
    auto attempt = [&](int value) {
        assignment[static_cast<std::size_t>(var)] = value;
        if (consistent() && extend(active, assignment, depth + 1))
            return true;
        assignment[static_cast<std::size_t>(var)] = -1;
        return false;
    };
    const int anchor = anchor_[depth];
    if (anchor < 0) {
        // No atom links var to an earlier variable: try every element.
        for (int x = 0; x < static_cast<int>(target_->element_count()); ++x)
            if (attempt(x))
                return true;
        return false;
    }
    const auto &a = atoms_[static_cast<std::size_t>(anchor)];
    if (a.subject == a.object) {
        // Unary atom on var: candidates are elements with that self-loop.
        for (int x = 0; x < static_cast<int>(target_->element_count()); ++x) {
            int f = target_->lookup(a.relation, x, x);
            if (f >= 0 && is_active(active, f) && attempt(x))
                return true;
        }
        return false;
    }
    if (a.subject == var) {
        int other = assignment[static_cast<std::size_t>(a.object)];
        if (other < 0) {
            for (int x = 0; x < static_cast<int>(target_->element_count()); ++x)
                if (attempt(x))
                    return true;
            return false;
        }
        for (const auto &arc : target_->in_arcs(a.relation, other))
            if (is_active(active, arc.fact) && attempt(arc.other))
                return true;
        return false;
    }
    int other = assignment[static_cast<std::size_t>(a.subject)];
    if (other < 0) {
        for (int x = 0; x < static_cast<int>(target_->element_count()); ++x)
            if (attempt(x))
                return true;
        return false;
    }
    for (const auto &arc : target_->out_arcs(a.relation, other))
        if (is_active(active, arc.fact) && attempt(arc.other))
            return true;
    return false;
}

// ---------------------------------------------------------------------------

std::optional<Homomorphism> find_homomorphism(const Instance &src, const Instance &dst) {
    TargetIndex index(dst);
    Pattern pattern(src, index);
    return pattern.find();
}

bool has_homomorphism(const Instance &src, const Instance &dst) {
    TargetIndex index(dst);
    return Pattern(src, index).matches();
}

bool is_homomorphism(const Homomorphism &h, const Instance &src, const Instance &dst) {
    for (const auto &f : src.facts()) {
        auto s = h.find(f.subject);
        auto o = h.find(f.object);
        if (s == h.end() || o == h.end())
            return false;
        if (!dst.contains({f.relation, s->second, o->second}))
            return false;
    }
    return true;
}

} // namespace urlab
