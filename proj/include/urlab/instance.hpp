#pragma once

#include <json.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace urlab {

/// A ground atom R(subject, object) over a binary signature. Unary surface
/// facts U(a) are stored as U(a,a).
struct Fact {
    std::string relation;
    std::string subject;
    std::string object;

    bool is_unary() const noexcept { return subject == object; }
    bool uses(std::string_view element) const noexcept { return subject == element || object == element; }

    /// The fact with every occurrence of `from` replaced by `to`.
    Fact renamed(std::string_view from, std::string_view to) const;

    friend auto operator<=>(const Fact &, const Fact &) = default;
    friend bool operator==(const Fact &, const Fact &) = default;
};

std::string to_string(const Fact &fact);

/// Ordered pair of distinct elements.
struct Edge {
    std::string left;
    std::string right;

    Edge reversed() const { return {right, left}; }

    friend auto operator<=>(const Edge &, const Edge &) = default;
    friend bool operator==(const Edge &, const Edge &) = default;
};

std::string to_string(const Edge &edge);

/// A finite set of facts in canonical order (relation, subject, object).
/// Immutable once built; every mutator returns a new value.
class Instance {
public:
    Instance() = default;
    explicit Instance(std::vector<Fact> facts);
    Instance(std::initializer_list<Fact> facts) : Instance(std::vector<Fact>(facts)) {}

    std::span<const Fact> facts() const noexcept { return facts_; }
    std::size_t size() const noexcept { return facts_.size(); }
    bool empty() const noexcept { return facts_.empty(); }
    const Fact &operator[](std::size_t i) const { return facts_[i]; }

    bool contains(const Fact &fact) const;
    /// Index of `fact` in canonical order, or size() when absent.
    std::size_t index_of(const Fact &fact) const;

    /// Sorted elements occurring in some fact.
    std::vector<std::string> domain() const;
    bool has_element(std::string_view element) const;
    std::set<std::string> relations() const;

    Instance with(std::span<const Fact> extra) const;
    Instance without(std::span<const Fact> removed) const;
    /// Facts whose bit is set in `mask` (bit i is facts()[i]).
    Instance subset(std::uint64_t mask) const;
    /// Applies an element renaming; unmapped elements are kept.
    Instance renamed(const std::map<std::string, std::string> &mapping) const;

    friend bool operator==(const Instance &, const Instance &) = default;

private:
    std::vector<Fact> facts_;
};

/// Deterministic fresh-element allocator: base name stripped of any "#k"
/// suffix, then "#k" with the smallest k >= 1 not yet used.
class FreshNames {
public:
    FreshNames() = default;
    explicit FreshNames(const Instance &instance);

    void reserve(const std::string &name) { used_.insert(name); }
    bool used(const std::string &name) const { return used_.contains(name); }
    std::string next(std::string_view base);

private:
    std::set<std::string> used_;
};

// ---------------------------------------------------------------------------
// Text and JSON formats

/// One fact per line: `R(a,b)` or `U(a)`. Blank lines and `#` comments are
/// skipped; duplicates collapse. Throws ParseError with the line number.
Instance parse_instance(std::string_view text);
/// Canonical text: one `R(a,b)` per line in canonical order.
std::string serialize_instance(const Instance &instance);

/// Parses a single fact token such as `S(a,b)`; line is used for errors.
Fact parse_fact(std::string_view text, std::size_t line = 1);
bool is_identifier(std::string_view name);

nlohmann::json instance_to_json(const Instance &instance);
Instance instance_from_json(const nlohmann::json &json);

/// Graphviz rendering; unary facts become node labels.
std::string instance_to_dot(const Instance &instance, std::string_view name = "I");

// ---------------------------------------------------------------------------
// Unary encoding

/// Relations that occur in a unary fact of `instance`.
std::set<std::string> unary_relations(const Instance &instance);
std::string primed(std::string_view relation);

/// Renames every relation used in unary facts to its primed twin U'. Throws
/// PreconditionError when a relation is used both in unary and binary facts
/// or when the primed name already exists.
Instance encode_unary(const Instance &instance);

// ---------------------------------------------------------------------------
// Edges

bool is_edge(const Instance &instance, const Edge &edge);
/// Facts using both endpoints.
std::vector<Fact> covering_facts(const Instance &instance, const Edge &edge);
/// Facts using edge.left but not edge.right.
std::vector<Fact> left_incident_facts(const Instance &instance, const Edge &edge);
/// Facts using edge.right but not edge.left.
std::vector<Fact> right_incident_facts(const Instance &instance, const Edge &edge);
bool is_non_leaf(const Instance &instance, const Edge &edge);

struct EdgeEntry {
    Edge edge;
    std::vector<Fact> covering;
    bool non_leaf = false;
};

/// One entry per unordered pair joined by a binary fact, with
/// edge.left < edge.right. Use `both_orientations` to also get (v,u).
std::vector<EdgeEntry> edges_of(const Instance &instance, bool both_orientations = false);

/// Adds, for each covering fact of `edge`, its copy with edge.left renamed to
/// target.left and edge.right renamed to target.right.
Instance copy_edge(const Instance &instance, const Edge &edge, const Edge &target);

// ---------------------------------------------------------------------------
// Subinstance enumeration

inline constexpr std::size_t kDefaultMaxFacts = 24;
inline constexpr std::size_t kHardMaxFacts = 30;

/// Cap from URLAB_MAX_FACTS when set (clamped to kHardMaxFacts), else 24.
std::size_t default_max_facts();

/// Enumerates all 2^n subinstances in mask index order (bit i = i-th fact
/// in canonical order). Ranges may be consumed concurrently.
class Subinstances {
public:
    explicit Subinstances(const Instance &instance, std::size_t cap = default_max_facts());

    std::uint64_t count() const noexcept { return std::uint64_t{1} << instance_->size(); }
    Instance at(std::uint64_t mask) const { return instance_->subset(mask); }

    /// Splits [0, count) into at most `parts` contiguous non-empty ranges.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> partition(std::size_t parts) const;

    void for_each(const std::function<void(std::uint64_t, const Instance &)> &visit) const {
        for_each(0, count(), visit);
    }
    void for_each(std::uint64_t begin, std::uint64_t end,
                  const std::function<void(std::uint64_t, const Instance &)> &visit) const;

private:
    const Instance *instance_;
};

/// Throws CapExceeded when `size` exceeds `cap` (or the hard maximum).
void check_cap(std::string_view what, std::size_t size, std::size_t cap);

// ---------------------------------------------------------------------------
// Isomorphism

/// Serialization of the instance under a canonical element relabeling
/// ("c0", "c1", ...). Two instances are isomorphic iff their canonical forms
/// are equal.
std::string canonical_form(const Instance &instance);
/// Relabeling used by canonical_form: original element -> canonical name.
std::map<std::string, std::string> canonical_labeling(const Instance &instance);
bool isomorphic(const Instance &a, const Instance &b);
/// Cheap isomorphism invariant (degree sequence + relation multiset).
std::uint64_t invariant_hash(const Instance &instance);

} // namespace urlab

template <> struct std::hash<urlab::Fact> {
    std::size_t operator()(const urlab::Fact &f) const noexcept {
        std::hash<std::string> h;
        std::size_t seed = h(f.relation);
        seed ^= h(f.subject) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
        seed ^= h(f.object) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
        return seed;
    }
};
