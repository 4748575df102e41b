#include "urlab/instance.hpp"

#include "urlab/error.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <tuple>

namespace urlab {

Fact Fact::renamed(std::string_view from, std::string_view to) const {
    Fact out = *this;
    if (out.subject == from)
        out.subject = to;
    if (out.object == from)
        out.object = to;
    return out;
}

std::string to_string(const Fact &fact) {
    return fact.relation + "(" + fact.subject + "," + fact.object + ")";
}

std::string to_string(const Edge &edge) { return "(" + edge.left + "," + edge.right + ")"; }

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(std::vector<Fact> facts) : facts_(std::move(facts)) {
    std::sort(facts_.begin(), facts_.end());
    facts_.erase(std::unique(facts_.begin(), facts_.end()), facts_.end());
}

bool Instance::contains(const Fact &fact) const {
    return std::binary_search(facts_.begin(), facts_.end(), fact);
}

std::size_t Instance::index_of(const Fact &fact) const {
    auto it = std::lower_bound(facts_.begin(), facts_.end(), fact);
    if (it == facts_.end() || *it != fact)
        return facts_.size();
    return static_cast<std::size_t>(it - facts_.begin());
}

std::vector<std::string> Instance::domain() const {
    std::vector<std::string> out;
    out.reserve(facts_.size() * 2);
    for (const auto &f : facts_) {
        out.push_back(f.subject);
        out.push_back(f.object);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Instance::has_element(std::string_view element) const {
    return std::any_of(facts_.begin(), facts_.end(), [&](const Fact &f) { return f.uses(element); });
}

std::set<std::string> Instance::relations() const {
    std::set<std::string> out;
    for (const auto &f : facts_)
        out.insert(f.relation);
    return out;
}

Instance Instance::with(std::span<const Fact> extra) const {
    std::vector<Fact> all = facts_;
    all.insert(all.end(), extra.begin(), extra.end());
    return Instance(std::move(all));
}

Instance Instance::without(std::span<const Fact> removed) const {
    std::vector<Fact> sorted(removed.begin(), removed.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<Fact> kept;
    kept.reserve(facts_.size());
    for (const auto &f : facts_)
        if (!std::binary_search(sorted.begin(), sorted.end(), f))
            kept.push_back(f);
    Instance out;
    out.facts_ = std::move(kept);
    return out;
}

Instance Instance::subset(std::uint64_t mask) const {
    Instance out;
    for (std::size_t i = 0; i < facts_.size() && i < 64; ++i)
        if ((mask >> i) & 1U)
            out.facts_.push_back(facts_[i]);
    return out;
}

Instance Instance::renamed(const std::map<std::string, std::string> &mapping) const {
    auto map_one = [&](const std::string &x) -> const std::string & {
        auto it = mapping.find(x);
        return it == mapping.end() ? x : it->second;
    };
    std::vector<Fact> out;
    out.reserve(facts_.size());
    for (const auto &f : facts_)
        out.push_back({f.relation, map_one(f.subject), map_one(f.object)});
    return Instance(std::move(out));
}

// ---------------------------------------------------------------------------
// FreshNames

FreshNames::FreshNames(const Instance &instance) {
    for (auto &e : instance.domain())
        used_.insert(std::move(e));
}

std::string FreshNames::next(std::string_view base) {
    std::string stem(base.substr(0, base.find('#')));
    for (std::size_t k = 1;; ++k) {
        std::string candidate = stem + "#" + std::to_string(k);
        if (used_.insert(candidate).second)
            return candidate;
    }
}

// ---------------------------------------------------------------------------
// Text format

bool is_identifier(std::string_view name) {
    if (name.empty())
        return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '\'' ||
               c == '-' || c == ':' || c == '~';
    });
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

} // namespace

Fact parse_fact(std::string_view text, std::size_t line) {
    std::string_view s = trim(text);
    auto open = s.find('(');
    if (open == std::string_view::npos || s.empty() || s.back() != ')')
        throw ParseError("expected R(a,b) or U(a), got '" + std::string(s) + "'", line);
    std::string_view rel = trim(s.substr(0, open));
    std::string_view args = s.substr(open + 1, s.size() - open - 2);
    if (!is_identifier(rel))
        throw ParseError("bad relation name '" + std::string(rel) + "'", line, 1);
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= args.size(); ++i) {
        if (i == args.size() || args[i] == ',') {
            parts.push_back(trim(args.substr(start, i - start)));
            start = i + 1;
        }
    }
    if (parts.size() < 1 || parts.size() > 2)
        throw ParseError("expected one or two arguments in '" + std::string(s) + "'", line);
    for (auto p : parts)
        if (!is_identifier(p))
            throw ParseError("bad element name '" + std::string(p) + "' in '" + std::string(s) + "'",
                             line, open + 2);
    std::string subject(parts[0]);
    std::string object(parts.size() == 2 ? parts[1] : parts[0]);
    return {std::string(rel), subject, object};
}

Instance parse_instance(std::string_view text) {
    std::vector<Fact> facts;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        std::string_view line = text.substr(pos, end - pos);
        if (auto hash = line.find("//"); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty() && line.front() != '%' && !(line.front() == '#' && line.size() > 1 && line[1] == ' '))
            facts.push_back(parse_fact(line, line_no));
        if (end == text.size())
            break;
        pos = end + 1;
    }
    return Instance(std::move(facts));
}

std::string serialize_instance(const Instance &instance) {
    std::string out;
    for (const auto &f : instance.facts())
        out += to_string(f) + "\n";
    return out;
}

nlohmann::json instance_to_json(const Instance &instance) {
    nlohmann::json facts = nlohmann::json::array();
    for (const auto &f : instance.facts())
        facts.push_back({f.relation, f.subject, f.object});
    return {{"facts", facts}};
}

Instance instance_from_json(const nlohmann::json &json) {
    if (!json.is_object() || !json.contains("facts") || !json["facts"].is_array())
        throw ParseError("instance JSON must be an object with a \"facts\" array", 1);
    std::vector<Fact> facts;
    std::size_t i = 0;
    for (const auto &row : json["facts"]) {
        ++i;
        if (!row.is_array() || row.size() < 2 || row.size() > 3)
            throw ParseError("fact #" + std::to_string(i) + " must be [R, a] or [R, a, b]", 1);
        for (const auto &cell : row)
            if (!cell.is_string() || !is_identifier(cell.get<std::string>()))
                throw ParseError("fact #" + std::to_string(i) + " has a non-identifier entry", 1);
        auto subject = row[1].get<std::string>();
        facts.push_back({row[0].get<std::string>(), subject,
                         row.size() == 3 ? row[2].get<std::string>() : subject});
    }
    return Instance(std::move(facts));
}

std::string instance_to_dot(const Instance &instance, std::string_view name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n";
    std::map<std::string, std::vector<std::string>> labels;
    for (const auto &e : instance.domain())
        labels[e];
    for (const auto &f : instance.facts())
        if (f.is_unary())
            labels[f.subject].push_back(f.relation);
    for (const auto &[e, rels] : labels) {
        out << "  \"" << e << "\" [label=\"" << e;
        for (const auto &r : rels)
            out << "\\n" << r;
        out << "\"];\n";
    }
    for (const auto &f : instance.facts())
        if (!f.is_unary())
            out << "  \"" << f.subject << "\" -> \"" << f.object << "\" [label=\"" << f.relation << "\"];\n";
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Unary encoding

std::set<std::string> unary_relations(const Instance &instance) {
    std::set<std::string> out;
    for (const auto &f : instance.facts())
        if (f.is_unary())
            out.insert(f.relation);
    return out;
}

std::string primed(std::string_view relation) { return std::string(relation) + "'"; }

Instance encode_unary(const Instance &instance) {
    auto unary = unary_relations(instance);
    auto all = instance.relations();
    for (const auto &f : instance.facts())
        if (!f.is_unary() && unary.contains(f.relation))
            throw PreconditionError("relation " + f.relation + " is used in both unary and binary facts");
    for (const auto &u : unary)
        if (all.contains(primed(u)))
            throw PreconditionError("primed relation " + primed(u) + " already exists");
    std::vector<Fact> out;
    out.reserve(instance.size());
    for (const auto &f : instance.facts())
        out.push_back({unary.contains(f.relation) ? primed(f.relation) : f.relation, f.subject, f.object});
    return Instance(std::move(out));
}

// ---------------------------------------------------------------------------
// Edges

bool is_edge(const Instance &instance, const Edge &edge) {
    if (edge.left == edge.right)
        return false;
    return std::any_of(instance.facts().begin(), instance.facts().end(),
                       [&](const Fact &f) { return f.uses(edge.left) && f.uses(edge.right); });
}

std::vector<Fact> covering_facts(const Instance &instance, const Edge &edge) {
    std::vector<Fact> out;
    if (edge.left == edge.right)
        return out;
    for (const auto &f : instance.facts())
        if (f.uses(edge.left) && f.uses(edge.right))
            out.push_back(f);
    return out;
}

std::vector<Fact> left_incident_facts(const Instance &instance, const Edge &edge) {
    std::vector<Fact> out;
    for (const auto &f : instance.facts())
        if (f.uses(edge.left) && !f.uses(edge.right))
            out.push_back(f);
    return out;
}

std::vector<Fact> right_incident_facts(const Instance &instance, const Edge &edge) {
    return left_incident_facts(instance, edge.reversed());
}

bool is_non_leaf(const Instance &instance, const Edge &edge) {
    return is_edge(instance, edge) && !left_incident_facts(instance, edge).empty() &&
           !right_incident_facts(instance, edge).empty();
}

std::vector<EdgeEntry> edges_of(const Instance &instance, bool both_orientations) {
    std::map<Edge, std::vector<Fact>> grouped;
    for (const auto &f : instance.facts()) {
        if (f.is_unary())
            continue;
        Edge e = f.subject < f.object ? Edge{f.subject, f.object} : Edge{f.object, f.subject};
        grouped[e].push_back(f);
    }
    std::vector<EdgeEntry> out;
    for (auto &[edge, covering] : grouped) {
        bool non_leaf = !left_incident_facts(instance, edge).empty() &&
                        !right_incident_facts(instance, edge).empty();
        out.push_back({edge, covering, non_leaf});
        if (both_orientations)
            out.push_back({edge.reversed(), covering, non_leaf});
    }
    if (both_orientations)
        std::sort(out.begin(), out.end(), [](const EdgeEntry &a, const EdgeEntry &b) { return a.edge < b.edge; });
    return out;
}

Instance copy_edge(const Instance &instance, const Edge &edge, const Edge &target) {
    if (target.left == target.right)
        throw PreconditionError("copy target " + to_string(target) + " has equal components");
    if (!is_edge(instance, edge))
        throw PreconditionError(to_string(edge) + " is not an edge");
    std::vector<Fact> copies;
    for (const auto &f : covering_facts(instance, edge)) {
        auto map_one = [&](const std::string &x) { return x == edge.left ? target.left : target.right; };
        copies.push_back({f.relation, map_one(f.subject), map_one(f.object)});
    }
    return instance.with(copies);
}

// ---------------------------------------------------------------------------
// Subinstances

std::size_t default_max_facts() {
    if (const char *env = std::getenv("URLAB_MAX_FACTS")) {
        char *end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return std::min<std::size_t>(v, kHardMaxFacts);
    }
    return kDefaultMaxFacts;
}

void check_cap(std::string_view what, std::size_t size, std::size_t cap) {
    std::size_t effective = std::min(cap, kHardMaxFacts);
    if (size > effective)
        throw CapExceeded(std::string(what), size, effective);
}

Subinstances::Subinstances(const Instance &instance, std::size_t cap) : instance_(&instance) {
    check_cap("subinstance enumeration", instance.size(), cap);
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> Subinstances::partition(std::size_t parts) const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    std::uint64_t total = count();
    if (parts == 0)
        parts = 1;
    std::uint64_t step = (total + parts - 1) / parts;
    for (std::uint64_t lo = 0; lo < total; lo += step)
        out.emplace_back(lo, std::min(total, lo + step));
    return out;
}

void Subinstances::for_each(std::uint64_t begin, std::uint64_t end,
                            const std::function<void(std::uint64_t, const Instance &)> &visit) const {
    for (std::uint64_t mask = begin; mask < end; ++mask)
        visit(mask, instance_->subset(mask));
}

// ---------------------------------------------------------------------------
// Canonical labeling: colour refinement, then individualisation over the
// remaining ties, keeping the smallest serialization.

namespace {

struct Indexed {
    std::vector<std::string> elements;
    // (relation, subject index, object index)
    std::vector<std::tuple<std::string, int, int>> facts;
};

Indexed index_instance(const Instance &instance) {
    Indexed out;
    out.elements = instance.domain();
    auto id = [&](const std::string &x) {
        return static_cast<int>(std::lower_bound(out.elements.begin(), out.elements.end(), x) - out.elements.begin());
    };
    for (const auto &f : instance.facts())
        out.facts.emplace_back(f.relation, id(f.subject), id(f.object));
    return out;
}

using Signature = std::vector<std::tuple<std::string, int, int>>;

std::vector<int> refine(const Indexed &g, std::vector<int> colour) {
    const std::size_t n = g.elements.size();
    for (;;) {
        std::vector<std::pair<int, Signature>> keys(n);
        for (std::size_t x = 0; x < n; ++x)
            keys[x].first = colour[x];
        for (const auto &[rel, s, o] : g.facts) {
            if (s == o) {
                keys[s].second.emplace_back(rel, 0, -1);
                continue;
            }
            keys[s].second.emplace_back(rel, 1, colour[o]);
            keys[o].second.emplace_back(rel, 2, colour[s]);
        }
        for (auto &k : keys)
            std::sort(k.second.begin(), k.second.end());
        std::vector<std::pair<int, Signature>> distinct = keys;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<int> next(n);
        for (std::size_t x = 0; x < n; ++x)
            next[x] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), keys[x]) - distinct.begin());
        std::size_t before = std::set<int>(colour.begin(), colour.end()).size();
        if (distinct.size() == before)
            return next;
        colour = std::move(next);
    }
}

std::string serialize_with(const Indexed &g, const std::vector<int> &rank) {
    std::vector<Fact> facts;
    facts.reserve(g.facts.size());
    for (const auto &[rel, s, o] : g.facts)
        facts.push_back({rel, "c" + std::to_string(rank[s]), "c" + std::to_string(rank[o])});
    std::sort(facts.begin(), facts.end());
    std::string out;
    for (const auto &f : facts)
        out += to_string(f) + "\n";
    return out;
}

struct CanonSearch {
    const Indexed &g;
    std::string best;
    std::vector<int> best_rank;
    bool found = false;
    std::size_t leaves = 0;

    void run(const std::vector<int> &colour) {
        std::vector<int> c = refine(g, colour);
        const std::size_t n = c.size();
        std::map<int, std::vector<int>> classes;
        for (std::size_t x = 0; x < n; ++x)
            classes[c[x]].push_back(static_cast<int>(x));
        const std::vector<int> *target = nullptr;
        for (const auto &[col, members] : classes)
            if (members.size() > 1) {
                target = &members;
                break;
            }
        if (target == nullptr) {
            if (++leaves > 2'000'000)
                throw InternalError("canonical labeling search exceeded its leaf budget");
            std::string s = serialize_with(g, c);
            if (!found || s < best) {
                best = std::move(s);
                best_rank = c;
                found = true;
            }
            return;
        }
        for (int pick : *target) {
            std::vector<int> next(n);
            for (std::size_t x = 0; x < n; ++x)
                next[x] = 2 * c[x] + 1;
            next[pick] = 2 * c[pick];
            run(next);
        }
    }
};

} // namespace

std::map<std::string, std::string> canonical_labeling(const Instance &instance) {
    Indexed g = index_instance(instance);
    CanonSearch search{g, {}, {}, false, 0};
    search.run(std::vector<int>(g.elements.size(), 0));
    std::map<std::string, std::string> out;
    for (std::size_t x = 0; x < g.elements.size(); ++x)
        out[g.elements[x]] = "c" + std::to_string(search.best_rank[x]);
    return out;
}

std::string canonical_form(const Instance &instance) {
    if (instance.empty())
        return {};
    Indexed g = index_instance(instance);
    CanonSearch search{g, {}, {}, false, 0};
    search.run(std::vector<int>(g.elements.size(), 0));
    return search.best;
}

bool isomorphic(const Instance &a, const Instance &b) {
    if (a.size() != b.size() || invariant_hash(a) != invariant_hash(b))
        return false;
    return canonical_form(a) == canonical_form(b);
}

std::uint64_t invariant_hash(const Instance &instance) {
    std::map<std::string, std::tuple<int, int, int>> per_element;
    std::vector<std::string> rels;
    for (const auto &f : instance.facts()) {
        rels.push_back(f.relation + (f.is_unary() ? "/1" : "/2"));
        if (f.is_unary()) {
            std::get<0>(per_element[f.subject])++;
        } else {
            std::get<1>(per_element[f.subject])++;
            std::get<2>(per_element[f.object])++;
        }
    }
    std::vector<std::tuple<int, int, int>> degrees;
    for (const auto &[e, d] : per_element)
        degrees.push_back(d);
    std::sort(degrees.begin(), degrees.end());
    std::sort(rels.begin(), rels.end());
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    for (const auto &[a, b, c] : degrees) {
        mix(static_cast<std::uint64_t>(a));
        mix(static_cast<std::uint64_t>(b) << 16);
        mix(static_cast<std::uint64_t>(c) << 32);
    }
    for (const auto &r : rels)
        mix(std::hash<std::string>{}(r));
    return h;
}

} // namespace urlab
