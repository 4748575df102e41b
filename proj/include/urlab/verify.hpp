#pragma once

#include "urlab/instance.hpp"
#include "urlab/query.hpp"

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace urlab {

struct SuiteOptions {
    /// largest random instance (facts)
    std::size_t max_facts = 12;
    /// random cases per suite; suites with a floor (renorm 200, dissoc-hom
    /// 500, mc 50) never go below it
    std::size_t trials = 200;
    std::uint64_t seed = 7;
    std::size_t workers = 1;
};

struct CheckResult {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    bool passed = true;
    std::vector<CheckResult> checks;
    double seconds = 0;
    /// counters worth reporting (cases run, largest q, ...)
    nlohmann::json stats = nlohmann::json::object();
};

nlohmann::json to_json(const SuiteResult &result);

/// Suite names in acceptance order.
std::vector<std::string> suite_names();
std::string suite_description(std::string_view name);
/// Throws PreconditionError for an unknown suite name.
SuiteResult run_suite(std::string_view name, const SuiteOptions &options = {});

/// Random instance over unary R, T and binary S, S' with up to max_facts
/// facts on a domain of 2..max_domain elements.
Instance random_instance(std::mt19937_64 &rng, std::size_t max_facts, std::size_t max_domain = 5);

/// Queries over R, S, S', T used by the randomized suites: the builtins
/// plus a few extra UCQs and RPQs.
std::vector<Query> query_pool();

} // namespace urlab
