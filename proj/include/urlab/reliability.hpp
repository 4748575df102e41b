#pragma once

#include "urlab/instance.hpp"
#include "urlab/query.hpp"
#include "urlab/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace urlab {

/// Tuple-independent database: an instance with one probability per fact,
/// aligned with the canonical fact order.
struct TID {
    Instance instance;
    std::vector<Probability> pi;

    TID() = default;
    TID(Instance instance, std::vector<Probability> pi);
    static TID uniform(Instance instance, const Probability &p);

    const Probability &prob(const Fact &fact) const;
};

/// Lines `R(a,b) 1/2`. A line without a probability takes `fallback`, or is
/// an error when no fallback is given. Repeated facts must agree.
TID parse_tid(std::string_view text, std::optional<Probability> fallback = std::nullopt);
std::string serialize_tid(const TID &tid);
/// {"facts":[["S","a","b","1/2"],...]}
nlohmann::json tid_to_json(const TID &tid);
TID tid_from_json(const nlohmann::json &json);

/// One bit per subinstance mask: set iff the subinstance satisfies Q.
class SatisfactionMap {
public:
    SatisfactionMap() = default;
    SatisfactionMap(std::size_t facts, std::vector<std::uint64_t> bits)
        : facts_(facts), bits_(std::move(bits)) {}

    std::size_t facts() const noexcept { return facts_; }
    std::uint64_t size() const noexcept { return std::uint64_t{1} << facts_; }
    bool satisfied(std::uint64_t mask) const { return (bits_[mask >> 6] >> (mask & 63)) & 1U; }
    std::span<const std::uint64_t> words() const noexcept { return bits_; }
    std::uint64_t count() const;

private:
    std::size_t facts_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Enumerates every subinstance in index order. Each worker keeps the
/// satisfying masks it had to evaluate and skips any mask covering one of
/// them; the map does not depend on the worker count.
SatisfactionMap satisfaction_map(const Query &query, const Instance &instance, std::size_t workers = 1,
                                 std::size_t cap = default_max_facts());

BigInt ur_count(const Query &query, const Instance &instance, std::size_t workers = 1,
                std::size_t cap = default_max_facts());

/// Exact probability that a random subinstance satisfies Q.
Probability pqe(const Query &query, const TID &tid, std::size_t workers = 1, std::size_t cap = default_max_facts());
/// Same weights from a precomputed map.
Probability pqe(const SatisfactionMap &map, const TID &tid);
/// Reference form: per satisfying subset, the product of pi over present
/// facts and 1 - pi over absent ones, summed as rationals.
Probability pqe_direct(const Query &query, const TID &tid, std::size_t cap = default_max_facts());

struct McEstimate {
    double estimate = 0;
    /// Wilson score half-width at 95%; 0 for certain or impossible events.
    double half_width = 0;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
};

/// Monte Carlo estimate; deterministic for a given seed.
McEstimate mc_estimate(const Query &query, const TID &tid, std::uint64_t samples, std::uint64_t seed);

} // namespace urlab
