#include "urlab/error.hpp"
#include "urlab/homomorphism.hpp"
#include "urlab/instance.hpp"
#include "urlab/rational.hpp"

#include <doctest.h>

using namespace urlab;

TEST_CASE("rational parsing and printing") {
    CHECK(rational_str(parse_rational("2/4")) == "1/2");
    CHECK(rational_str(parse_rational("0.25")) == "1/4");
    CHECK(rational_str(parse_rational("3")) == "3/1");
    CHECK(rational_str(parse_rational("010/08")) == "5/4");
    CHECK(rational_str(parse_rational("0.0625")) == "1/16");
    CHECK(rational_str(Rational(0)) == "0/1");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
    CHECK(round_nearest(Rational(5, 2)) == 3);
    CHECK(round_nearest(Rational(-5, 2)) == -3);
    CHECK(round_nearest(Rational(7, 3)) == 2);
    CHECK_THROWS(Probability(Rational(3, 2)));
    CHECK(Probability::parse("1/3").complement().str() == "2/3");
}

TEST_CASE("instance parsing") {
    Instance i = parse_instance("R(a)\nS(a,b)\nT(b)");
    CHECK(i.size() == 3);
    CHECK(i.domain() == std::vector<std::string>{"a", "b"});
    CHECK(i.contains(parse_fact("R(a,a)")));
    CHECK(parse_instance("S(a,b)\nS(a,b)").size() == 1);
    try {
        parse_instance("S(a,)");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.line() == 1);
    }
    CHECK(parse_instance("% comment\n# note\nS(a,b) // trailing\n\n").size() == 1);
    Instance j = parse_instance(serialize_instance(i));
    CHECK(i == j);
    CHECK(instance_from_json(instance_to_json(i)) == i);
    CHECK(instance_to_dot(i).find("digraph") != std::string::npos);
}

TEST_CASE("unary encoding") {
    CHECK(encode_unary(parse_instance("U(a,a)")) == parse_instance("U'(a,a)"));
    CHECK(encode_unary(parse_instance("S(a,b)")) == parse_instance("S(a,b)"));
    CHECK_THROWS_AS(encode_unary(parse_instance("U(a,a)\nU(a,b)")), PreconditionError);
}

TEST_CASE("homomorphisms") {
    auto h = find_homomorphism(parse_instance("S(x,y)"), parse_instance("S(a,b)"));
    REQUIRE(h);
    CHECK(h->at("x") == "a");
    CHECK(h->at("y") == "b");
    CHECK_FALSE(has_homomorphism(parse_instance("S(x,y)\nS(y,x)"), parse_instance("S(a,b)")));
    CHECK(has_homomorphism(parse_instance("S(x,y)\nS(y,x)"), parse_instance("S(a,a)")));
    Instance src = parse_instance("R(x,x)\nS(x,y)\nS(z,y)");
    Instance dst = parse_instance("R(a,a)\nS(a,b)");
    auto w = find_homomorphism(src, dst);
    REQUIRE(w);
    CHECK(is_homomorphism(*w, src, dst));
}

TEST_CASE("edges and incidence") {
    Instance w = parse_instance("R(b,b)\nT(b,c)\nS(b,a)\nS'(b,a)\nU(a,b)");
    CHECK(covering_facts(w, {"a", "b"}).size() == 3);
    Instance single = parse_instance("S(a,b)");
    CHECK(is_edge(single, {"a", "b"}));
    CHECK_FALSE(is_non_leaf(single, {"a", "b"}));
    Instance m0 = parse_instance("R(a,a)\nS(a,b)\nT(b,b)");
    CHECK(is_non_leaf(m0, {"a", "b"}));
    CHECK(left_incident_facts(m0, {"a", "b"}) == std::vector<Fact>{parse_fact("R(a,a)")});
    CHECK(edges_of(m0).size() == 1);
    CHECK(edges_of(m0, true).size() == 2);
}

TEST_CASE("copying an edge") {
    Instance i = parse_instance("R(a,a)\nS(a,b)\nS'(b,a)\nT(b,b)");
    Instance c = copy_edge(i, {"a", "b"}, {"a", "b'"});
    CHECK(c == i.with(std::vector<Fact>{parse_fact("S(a,b')"), parse_fact("S'(b',a)")}));
    CHECK_THROWS_AS(copy_edge(i, {"a", "b"}, {"a", "a"}), PreconditionError);
}

TEST_CASE("subinstance enumeration and caps") {
    Instance three = parse_instance("R(a,a)\nS(a,b)\nT(b,b)");
    CHECK(Subinstances(three).count() == 8);
    Instance empty;
    CHECK(Subinstances(empty).count() == 1);
    std::vector<Fact> many;
    for (int k = 0; k < 25; ++k)
        many.push_back({"S", "a", "x" + std::to_string(k)});
    Instance big(many);
    CHECK_THROWS_AS(Subinstances(big, kDefaultMaxFacts), CapExceeded);
    std::size_t seen = 0;
    Subinstances(three).for_each([&](std::uint64_t mask, const Instance &sub) {
        CHECK(sub.size() == static_cast<std::size_t>(std::popcount(mask)));
        ++seen;
    });
    CHECK(seen == 8);
}

TEST_CASE("fresh names and canonical forms") {
    Instance i = parse_instance("S(a,a#1)");
    FreshNames fresh(i);
    CHECK(fresh.next("a") == "a#2");
    CHECK(fresh.next("a") == "a#3");
    Instance x = parse_instance("R(a,a)\nS(a,b)\nT(b,b)");
    Instance y = parse_instance("R(q,q)\nS(q,p)\nT(p,p)");
    CHECK(isomorphic(x, y));
    CHECK(canonical_form(x) == canonical_form(y));
    CHECK(invariant_hash(x) == invariant_hash(y));
    CHECK_FALSE(isomorphic(x, parse_instance("R(a,a)\nS(b,a)\nT(b,b)")));
}
