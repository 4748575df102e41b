#include "urlab/error.hpp"
#include "urlab/reliability.hpp"
#include "urlab/verify.hpp"

#include <doctest.h>

using namespace urlab;

TEST_CASE("uniform reliability") {
    Query q0 = *builtin_query("q0");
    CHECK(ur_count(q0, parse_instance("R(a,a)\nS(a,b)\nT(b,b)")) == 1);
    CHECK(ur_count(q0, parse_instance("R(a,a)\nS(a,b)\nT(b,b)\nT(c,c)")) == 2);
    CHECK(ur_count(q0, Instance{}) == 0);
    // a path needs an element to start from, so even S* fails on the empty
    // instance
    CHECK_FALSE(evaluate(parse_query("rpq: S*"), Instance{}));
    CHECK(ur_count(parse_query("rpq: S*"), parse_instance("S(a,b)")) == 1);
}

TEST_CASE("probabilistic query evaluation") {
    Query q0 = *builtin_query("q0");
    TID tid = TID::uniform(parse_instance("R(a,a)\nS(a,b)\nT(b,b)"), Probability::half());
    CHECK(pqe(q0, tid).str() == "1/8");
    CHECK(pqe_direct(q0, tid).str() == "1/8");
    TID t = parse_tid("R(a,a) 1/3\nS(a,b) 1/2\nS(a,c) 1\nT(b,b) 2/3\nT(c,c) 0\n");
    CHECK(pqe(q0, t).str() == "1/9");
    CHECK(pqe(q0, t) == pqe_direct(q0, t));
    CHECK(tid_from_json(tid_to_json(t)).pi == t.pi);
    CHECK_THROWS_AS(parse_tid("S(a,b)"), ParseError);
    CHECK(parse_tid("S(a,b)", Probability::half()).pi.front().str() == "1/2");
}

TEST_CASE("worker count does not change results") {
    std::mt19937_64 rng(11);
    auto pool = query_pool();
    for (int t = 0; t < 30; ++t) {
        Instance i = random_instance(rng, 14);
        const Query &q = pool[static_cast<std::size_t>(t) % pool.size()];
        CHECK(ur_count(q, i, 1) == ur_count(q, i, 4));
    }
}

TEST_CASE("monte carlo") {
    Query q0 = *builtin_query("q0");
    TID certain = TID::uniform(parse_instance("R(a,a)\nS(a,b)\nT(b,b)"), Probability::one());
    McEstimate c = mc_estimate(q0, certain, 1000, 1);
    CHECK(c.estimate == 1.0);
    CHECK(c.half_width == 0.0);
    TID half = TID::uniform(parse_instance("R(a,a)\nS(a,b)\nT(b,b)"), Probability::half());
    McEstimate e = mc_estimate(q0, half, 100000, 3);
    CHECK(std::abs(e.estimate - 0.125) < 0.01);
    CHECK(mc_estimate(q0, half, 5000, 9).hits == mc_estimate(q0, half, 5000, 9).hits);
}
