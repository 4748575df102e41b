// Runs the ten acceptance suites and prints one line per criterion.

#include "urlab/verify.hpp"

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

namespace {

struct Criterion {
    const char *suite;
    double budget_seconds;
};

// suite order is the criterion numbering
const std::vector<Criterion> kCriteria = {
    {"renorm", 60},     {"pp2dnf-pqe", 60}, {"node-pipeline", 300}, {"saturation-pipeline", 300},
    {"lemma-proba", 10}, {"structure", 120}, {"dissoc-hom", 60},     {"fixtures", 10},
    {"coding-equivalence", 120}, {"mc", 60},
};

} // namespace

int main() {
    urlab::SuiteOptions options;
    options.max_facts = 12;
    options.trials = 200;
    options.seed = 7;
    options.workers = 1;

    int failed = 0;
    for (std::size_t i = 0; i < kCriteria.size(); ++i) {
        const auto &c = kCriteria[i];
        std::string note;
        bool ok = false;
        double seconds = 0;
        try {
            auto r = urlab::run_suite(c.suite, options);
            seconds = r.seconds;
            ok = r.passed && r.seconds <= c.budget_seconds;
            for (const auto &check : r.checks)
                if (!check.ok)
                    note += "; " + check.name + ": " + check.detail;
            if (r.seconds > c.budget_seconds)
                note += "; over the time budget";
        } catch (const std::exception &e) {
            note = std::string("; exception: ") + e.what();
        }
        std::printf("%s  %2zu %-20s %8.3f s (budget %g s)%s\n", ok ? "PASS" : "FAIL", i + 1, c.suite, seconds,
                    c.budget_seconds, note.c_str());
        failed += ok ? 0 : 1;
    }
    std::printf("%zu/%zu acceptance criteria passed\n", kCriteria.size() - static_cast<std::size_t>(failed),
                kCriteria.size());
    return failed == 0 ? 0 : 1;
}
