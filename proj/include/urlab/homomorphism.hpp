#pragma once

#include "urlab/instance.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace urlab {

using Homomorphism = std::map<std::string, std::string>;

/// Integer view of a target instance: fact i of the instance is fact i here,
/// so a bitmask over facts selects a subinstance without copying.
class TargetIndex {
public:
    explicit TargetIndex(const Instance &instance);

    std::size_t fact_count() const noexcept { return facts_.size(); }
    std::size_t element_count() const noexcept { return elements_.size(); }
    const std::string &element(int id) const { return elements_[static_cast<std::size_t>(id)]; }
    int element_id(const std::string &name) const;
    int relation_id(const std::string &name) const;

    struct IndexedFact {
        int relation;
        int subject;
        int object;
    };
    const IndexedFact &fact(std::size_t i) const { return facts_[i]; }

    /// Fact index of R(a,b), or -1.
    int lookup(int relation, int subject, int object) const;

    struct Arc {
        int other;
        int fact;
    };
    /// Facts R(x, ·) for subject x.
    std::span<const Arc> out_arcs(int relation, int subject) const;
    /// Facts R(·, x) for object x.
    std::span<const Arc> in_arcs(int relation, int object) const;

private:
    std::vector<std::string> elements_;
    std::map<std::string, int> relation_ids_;
    std::vector<IndexedFact> facts_;
    std::unordered_map<std::uint64_t, int> lookup_;
    // [relation * elements + element] -> arcs
    std::vector<std::vector<Arc>> out_, in_;
};

/// Active-fact set: empty span means every fact is active, else one bit per
/// fact (bit i of word i/64).
using ActiveFacts = std::span<const std::uint64_t>;

inline bool is_active(ActiveFacts active, int fact) {
    return active.empty() || ((active[static_cast<std::size_t>(fact) >> 6] >> (fact & 63)) & 1U);
}

/// A source instance (e.g. a CQ body) compiled against one target index.
/// Variables are ordered once: most already-ordered neighbours first, then
/// highest degree.
class Pattern {
public:
    Pattern(const Instance &source, const TargetIndex &target);

    /// True iff the source maps homomorphically into the active facts.
    bool matches(ActiveFacts active = {}) const;
    /// Witness mapping over the active facts, if any.
    std::optional<Homomorphism> find(ActiveFacts active = {}) const;

private:
    struct Atom {
        int relation;
        int subject;
        int object;
    };
    bool search(ActiveFacts active, std::vector<int> &assignment) const;
    bool extend(ActiveFacts active, std::vector<int> &assignment, std::size_t depth) const;

    const TargetIndex *target_;
    std::vector<std::string> variables_;
    std::vector<Atom> atoms_;
    bool impossible_ = false;
    std::vector<int> order_;
    // atoms to check once order_[d] is assigned, plus the atom used to
    // generate candidates for it (or -1)
    std::vector<std::vector<int>> checks_;
    std::vector<int> anchor_;
};

/// Witness homomorphism from src to dst, if one exists. Deterministic.
std::optional<Homomorphism> find_homomorphism(const Instance &src, const Instance &dst);
bool has_homomorphism(const Instance &src, const Instance &dst);

/// True iff `h` maps every fact of src to a fact of dst.
bool is_homomorphism(const Homomorphism &h, const Instance &src, const Instance &dst);

} // namespace urlab
