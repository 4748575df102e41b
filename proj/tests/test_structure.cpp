#include "urlab/error.hpp"
#include "urlab/fixtures.hpp"
#include "urlab/homomorphism.hpp"
#include "urlab/structure.hpp"

#include <doctest.h>

using namespace urlab;

TEST_CASE("edge analysis on the worked examples") {
    auto w = fixtures::weight_example();
    CHECK(analyze_edge(w.instance, w.edge).weight() == 3);

    auto g = fixtures::garbage_example();
    auto a = analyze_edge(g.instance, g.edge);
    CHECK(a.left_garbage == std::vector<Fact>{parse_fact("S(a,b')")});
    CHECK(a.right_garbage.size() == 2);
    CHECK_FALSE(a.clean());

    auto c = fixtures::classification_example();
    auto b = analyze_edge(c.instance, c.edge);
    CHECK(b.lex_weight() == std::pair<std::size_t, std::size_t>{2, 2});
    CHECK(b.extra_weight() == 9);
    CHECK(b.triangles.size() == 4);
}

TEST_CASE("dissociation") {
    Instance m0 = fixtures::m0().instance;
    CHECK(dissociate(m0, {"a", "b"}) == parse_instance("R(a,a)\nS(a,b#1)\nS(a#1,b)\nT(b,b)"));
    Instance leaf = parse_instance("S(a,b)");
    auto d = dissociate_detail(leaf, {"a", "b"});
    CHECK(d.kind == Dissociation::Kind::Leaf);
    CHECK(isomorphic(d.instance, leaf));
    CHECK_FALSE(d.instance.has_element("a"));
    Instance apart = parse_instance("R(a,a)\nT(b,b)");
    CHECK(dissociate(apart, {"a", "b"}) == apart);
    CHECK(has_homomorphism(dissociate(m0, {"a", "b"}), m0));
}

TEST_CASE("tightness") {
    auto m0 = fixtures::m0();
    CHECK(is_tight(*builtin_query("q0"), m0.instance, m0.edge));
    auto m1 = fixtures::q1_model();
    CHECK(is_tight(*builtin_query("q1"), m1.instance, m1.edge));
    Instance twice = parse_instance("R(a,a)\nS(a,b)\nT(b,b)\nR(c,c)\nS(c,d)\nT(d,d)");
    CHECK_FALSE(is_tight(*builtin_query("q0"), twice, {"a", "b"}));
    CHECK_THROWS_AS(is_tight(*builtin_query("q0"), parse_instance("S(a,b)"), {"a", "b"}), PreconditionError);
}

TEST_CASE("subinstance minimality") {
    Query q0 = *builtin_query("q0");
    CHECK(check_subinstance_minimal(q0, fixtures::m0().instance));
    CHECK_FALSE(check_subinstance_minimal(q0, parse_instance("R(a,a)\nS(a,b)\nT(b,b)\nT(c,c)")));
}

TEST_CASE("cleaning an edge") {
    auto ex = fixtures::cleanify_example();
    auto out = cleanify(ex.query, ex.before.instance, ex.before.edge);
    CHECK(out.instance == ex.expected);
    CHECK(analyze_edge(out.instance, out.edge).clean());
    auto m0 = fixtures::m0();
    CHECK(cleanify(*builtin_query("q0"), m0.instance, m0.edge).instance == m0.instance);
}

TEST_CASE("critical models") {
    auto m0 = fixtures::m0();
    CriticalModel cm = make_critical_model(*builtin_query("q0"), m0.instance, m0.edge);
    CHECK(cm.weights.theta == 1);
    CHECK(cm.f_left == parse_fact("R(a,a)"));
    CHECK(cm.f_right == parse_fact("T(b,b)"));
    CHECK_THROWS_AS(make_critical_model(*builtin_query("q0"), m0.instance.with(std::vector<Fact>{parse_fact("T(c,c)")}),
                                        m0.edge),
                    PreconditionError);

    auto r = find_critical_model(*builtin_query("q0"), {4, 4, 100000});
    REQUIRE(r.model);
    CHECK(r.model->weights.theta == 1);
    CHECK(isomorphic(r.model->instance, m0.instance));
    auto r1 = find_critical_model(*builtin_query("q1"));
    REQUIRE(r1.model);
    CHECK(r1.model->weights.theta == 2);
    CHECK(r1.model->weights.xi == 2);
}
