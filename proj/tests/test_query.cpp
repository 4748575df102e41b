#include "urlab/error.hpp"
#include "urlab/query.hpp"

#include <doctest.h>

#include <algorithm>

using namespace urlab;

namespace {
Instance inst(const char *text) { return parse_instance(text); }
} // namespace

TEST_CASE("query DSL") {
    Query q = parse_query("ucq: R(x,x),S(x,y),T(y,y)");
    REQUIRE(q.is_ucq());
    CHECK(q.ucq().disjuncts.size() == 1);
    Query r = parse_query("rpq: R . S* . T");
    REQUIRE_FALSE(r.is_ucq());
    CHECK_FALSE(r.rpq().two_way);
    CHECK(parse_query("rpq[2way]: R . S* . T").rpq().two_way);
    Query tagged = parse_query("rpq[2way; start=A; end=B]: S*");
    CHECK(tagged.rpq().start_tag == "A");
    CHECK(tagged.rpq().end_tag == "B");
    CHECK_THROWS_AS(parse_query("ucq: R(x"), ParseError);
    CHECK_THROWS_AS(parse_query("rpq: R . (S"), ParseError);
    for (const auto &name : builtin_query_names()) {
        Query b = *builtin_query(name);
        CHECK(to_string(parse_query(to_string(b))) == to_string(b));
    }
    CHECK_FALSE(builtin_query("nope"));
}

TEST_CASE("evaluation") {
    Query q0 = *builtin_query("q0");
    CHECK(evaluate(q0, inst("R(a,a)\nS(a,b)\nT(b,b)")));
    CHECK_FALSE(evaluate(q0, inst("R(a,a)\nS(a,b')\nS(a',b)\nT(b,b)")));
    Instance path = inst("R(a,a)\nS(a,b)\nS(c,b)\nS(c,d)\nT(d,d)");
    CHECK(evaluate(*builtin_query("rpq2"), path));
    CHECK_FALSE(evaluate(*builtin_query("rpq1"), path));
    CHECK(evaluate(*builtin_query("rpq1"), inst("R(a,a)\nS(a,b)\nS(b,c)\nT(c,c)")));
    CHECK(evaluate(*builtin_query("rpq1"), inst("R(a,a)\nT(a,a)")));
    Query u = parse_query("ucq: A(x,x) | S(x,y),S(y,x)");
    CHECK(evaluate(u, inst("S(a,b)\nS(b,a)")));
    CHECK_FALSE(evaluate(u, inst("S(a,b)")));
}

TEST_CASE("evaluator masks agree with subinstances") {
    Query q = *builtin_query("rpq2");
    Instance i = inst("R(a,a)\nS(a,b)\nS(c,b)\nS(c,d)\nT(d,d)\nT(b,b)");
    Evaluator ev(q, i);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << i.size()); ++m)
        CHECK(ev.holds(m) == evaluate(q, i.subset(m)));
}

TEST_CASE("minimal models") {
    Query q0 = *builtin_query("q0");
    auto one = minimal_models_within(q0, inst("R(a,a)\nS(a,b)\nT(b,b)\nT(c,c)"));
    REQUIRE(one.size() == 1);
    CHECK(one[0] == inst("R(a,a)\nS(a,b)\nT(b,b)"));
    CHECK(minimal_models_within(q0, inst("S(a,b)")).empty());
    CHECK(minimal_models_within(q0, inst("R(a,a)\nS(a,b)\nS(a,c)\nT(b,b)\nT(c,c)")).size() == 2);
}

TEST_CASE("bounded word expansion") {
    auto words = rpq_words(builtin_query("rpq1")->rpq(), 4);
    CHECK(words.size() == 3);
    CHECK(std::find(words.begin(), words.end(), std::vector<std::string>{"R", "T"}) != words.end());
}
