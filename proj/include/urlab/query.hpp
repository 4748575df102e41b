#pragma once

#include "urlab/homomorphism.hpp"
#include "urlab/instance.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace urlab {

/// Union of conjunctive queries; each disjunct body is an instance over
/// variables.
struct UCQ {
    std::vector<Instance> disjuncts;
};

struct Regex {
    enum class Kind { Symbol, Concat, Alt, Star, Plus };
    Kind kind = Kind::Symbol;
    std::string symbol;
    std::vector<Regex> children;
};

std::string to_string(const Regex &regex);
/// Relation names occurring in the regex.
std::set<std::string> regex_symbols(const Regex &regex);

/// Regular path query. With tags, the path must start on an element
/// carrying a unary start-tag fact and end on one carrying the end tag.
struct RPQ {
    Regex regex;
    std::optional<std::string> start_tag;
    std::optional<std::string> end_tag;
    bool two_way = false;
};

enum class Boundedness { Bounded, Unbounded, Unknown };

struct Query {
    std::variant<UCQ, RPQ> body;
    /// Metadata only; never consulted during evaluation.
    Boundedness hint = Boundedness::Unknown;

    bool is_ucq() const { return std::holds_alternative<UCQ>(body); }
    const UCQ &ucq() const { return std::get<UCQ>(body); }
    const RPQ &rpq() const { return std::get<RPQ>(body); }
};

/// DSL:
///   ucq: R(x,y),S(y) | A(x,x)
///   rpq: R . S* . T
///   rpq[2way]: R . (S | S')+ . T
///   rpq[2way; start=A; end=B]: S*
/// Throws ParseError with the column of the offending token.
Query parse_query(std::string_view text);
/// Canonical DSL text; parse_query(to_string(q)) is equivalent to q.
std::string to_string(const Query &query);

/// Queries known by name on the command line: q0, q1 (Q'), q2 (Q''),
/// rpq1 (one-way R.S*.T), rpq2 (two-way R.S*.T).
std::optional<Query> builtin_query(std::string_view name);
std::vector<std::string> builtin_query_names();

/// Rewrites the query for instances passed through encode_unary: atoms and
/// symbols over the given unary relations are renamed to their primed twins.
Query encode_unary(const Query &query, const std::set<std::string> &unary);

/// Relations mentioned by the query.
std::set<std::string> query_relations(const Query &query);

namespace detail {
struct Nfa;
}

/// Query compiled against a fixed instance; evaluates any subinstance given
/// as an active-fact bitmask. Safe to call concurrently.
class Evaluator {
public:
    Evaluator(const Query &query, const Instance &instance);
    Evaluator(const Evaluator &) = delete;
    Evaluator &operator=(const Evaluator &) = delete;

    bool holds(ActiveFacts active) const;
    bool holds(std::uint64_t mask) const { return holds(ActiveFacts(&mask, 1)); }
    bool holds_all() const { return holds(ActiveFacts{}); }

    const Instance &instance() const noexcept { return *instance_; }
    std::size_t fact_count() const noexcept { return instance_->size(); }

private:
    bool holds_rpq(ActiveFacts active) const;

    const Instance *instance_;
    TargetIndex index_;
    std::vector<Pattern> patterns_;
    std::shared_ptr<const detail::Nfa> nfa_;
    // per NFA state: (relation id, target state)
    std::vector<std::vector<std::pair<int, int>>> rel_moves_;
    bool rpq_ = false;
    bool two_way_ = false;
    int start_tag_ = -1;
    int end_tag_ = -1;
    bool start_tag_missing_ = false;
    bool end_tag_missing_ = false;
};

bool evaluate(const Query &query, const Instance &instance);

/// Subinstance-minimal models contained in `instance`, as fact masks in
/// increasing index order.
std::vector<std::uint64_t> minimal_model_masks(const Query &query, const Instance &instance,
                                               std::size_t cap = default_max_facts());
std::vector<Instance> minimal_models_within(const Query &query, const Instance &instance,
                                            std::size_t cap = default_max_facts());

/// Bounded word expansion of an RPQ: every word of length <= max_length
/// accepted by the regex, as sequences of symbols.
std::vector<std::vector<std::string>> rpq_words(const RPQ &rpq, std::size_t max_length);

} // namespace urlab
