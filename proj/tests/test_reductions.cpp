#include "urlab/error.hpp"
#include "urlab/fixtures.hpp"
#include "urlab/reductions.hpp"

#include <doctest.h>

using namespace urlab;

namespace {
Probability p(const char *text) { return Probability::parse(text); }
STGraph path() { return make_stgraph({"r", "a", "s"}, {{"r", "a"}, {"a", "s"}}, "r", "s"); }
} // namespace

TEST_CASE("vertex copies") {
    STGraph g2 = build_vertex_copies(path(), 2);
    CHECK(g2.vertices.size() == 4);
    CHECK(g2.edges.size() == 4);
    CHECK(build_vertex_copies(path(), 1).edges.size() == 2);
    STGraph inner = make_stgraph({"r", "a", "b", "s"}, {{"r", "a"}, {"a", "b"}, {"b", "s"}}, "r", "s");
    STGraph g3 = build_vertex_copies(inner, 3);
    CHECK(g3.edges.size() == 3 + 9 + 3);
}

TEST_CASE("good subsets and the node pipeline") {
    CHECK(good_subset_counts(path()) == std::vector<BigInt>{0, 1});
    STGraph apart = make_stgraph({"r", "a", "s"}, {{"r", "a"}}, "r", "s");
    auto run = node_connectedness_pipeline(apart, p("1/2"));
    CHECK(run.total == 0);
    CHECK(node_connectedness_pipeline(path(), p("1/3")).total == 1);
    STGraph square =
        make_stgraph({"r", "a", "b", "s"}, {{"r", "a"}, {"a", "s"}, {"r", "b"}, {"b", "s"}}, "r", "s");
    auto sq = node_connectedness_pipeline(square, p("2/3"), brute_force_node_oracle);
    CHECK(sq.counts == std::vector<BigInt>{0, 2, 1});
    CHECK(interpolate_node_counts(
              p("1/2"), {{Probability::zero(), Provenance::External}, {Probability::zero(), Provenance::External}}, 3) ==
          std::vector<BigInt>{0, 0});
}

TEST_CASE("oracles agree") {
    STGraph tri = make_stgraph({"r", "a", "s"}, {{"r", "a"}, {"a", "s"}, {"r", "s"}}, "r", "s");
    STGraph square =
        make_stgraph({"r", "a", "b", "s"}, {{"r", "a"}, {"a", "b"}, {"a", "s"}, {"r", "b"}, {"b", "s"}}, "r", "s");
    CHECK_THROWS_AS(build_vertex_copies(tri, 2), PreconditionError);
    for (unsigned q = 1; q <= 3; ++q) {
        CHECK(collapsed_node_oracle(square, p("1/3"), q).value ==
              brute_force_node_oracle(square, p("1/3"), q).value);
        if (q <= 2)
            CHECK(collapsed_ustcon_oracle(tri, p("1/2"), p("1/3"), q).value ==
                  brute_force_path_oracle(tri, p("1/2"), p("1/3"), q).value);
    }
}

TEST_CASE("saturation") {
    CHECK(saturation_parameter(p("1/2"), p("1/2"), 1) == 2);
    CHECK(saturation_parameter(p("3/4"), p("1/8"), 2) == 3);
    CHECK(saturation_bound(p("3/4"), 3, 2) == Rational(127, 4096));
    ParallelPaths pp = build_parallel_paths(make_stgraph({"r", "s"}, {{"r", "s"}}, "r", "s"), 2);
    CHECK(pp.graph.vertices.size() == 4);
    CHECK(pp.graph.edges.size() == 4);
    CHECK(pp.registry.size() == 2);
    STGraph edge = make_stgraph({"r", "s"}, {{"r", "s"}}, "r", "s");
    CHECK(collapsed_ustcon_oracle(edge, p("1/2"), p("1/2"), 1).value.str() == "1/32");
    auto run = saturation_pipeline(edge, p("1/2"), p("1/2"));
    CHECK(run.z == 1);
    CHECK(run.epsilon_prime < run.epsilon);
    STGraph tri = make_stgraph({"r", "a", "s"}, {{"r", "a"}, {"a", "s"}, {"r", "s"}}, "r", "s");
    auto t = saturation_pipeline(tri, p("1/2"), p("1/2"));
    CHECK(Rational(t.z) / 8 == ustcon_prob(p("1/2"), Probability::one(), tri).value());
}

TEST_CASE("iteration") {
    auto m0 = fixtures::m0();
    CHECK(iterate_model(m0.instance, m0.edge, 1) == m0.instance);
    Instance k2 = parse_instance("R(a,a)\nS(a,b#1)\nS(a#1,b#1)\nS(a#1,b)\nT(b,b)");
    CHECK(iterate_model(m0.instance, m0.edge, 2) == k2);
    CHECK(iterate_model(m0.instance, m0.edge, 2, {IterationPolicy::EndpointsOnly, {}, {}}) == k2);
    CHECK(iterate_model(m0.instance, m0.edge, 3).size() == 2 + 5);
    CHECK(is_iterable(*builtin_query("rpq2"), m0.instance, m0.edge));
    CHECK_FALSE(is_iterable(*builtin_query("rpq1"), m0.instance, m0.edge));
    CHECK_FALSE(is_iterable(*builtin_query("q0"), m0.instance, m0.edge));
    CHECK(parse_iteration_policy("include-dashed") == IterationPolicy::IncludeDashed);
    CHECK_THROWS(parse_iteration_policy("sideways"));
}

TEST_CASE("codings") {
    auto m0 = fixtures::m0();
    CriticalModel cm = make_critical_model(*builtin_query("q0"), m0.instance, m0.edge);
    Coding empty = saturated_coding(cm, BipartiteGraph{{"1"}, {"1"}, {}}, 2);
    CHECK_FALSE(evaluate(*builtin_query("q0"), empty.instance));
    Coding one = saturated_coding(cm, BipartiteGraph{{"1"}, {"1"}, {{"1", "1"}}}, 2);
    CHECK(one.instance == parse_instance("R(a_1,a_1)\nS(a_1,b_1)\nT(b_1,b_1)"));
    CHECK(one.roles.at(parse_fact("S(a_1,b_1)")).kind == FactRole::Kind::EdgeCopy);

    CriticalModel cm2 = make_critical_model(*builtin_query("rpq2"), m0.instance, m0.edge);
    STGraph edge = make_stgraph({"r", "s"}, {{"r", "s"}}, "r", "s");
    Coding c = iterable_coding(cm2, edge);
    std::size_t u = 0, v = 0;
    for (const auto &x : c.instance.domain()) {
        u += x.rfind("a_", 0) == 0;
        v += x.rfind("b_", 0) == 0;
    }
    CHECK(u == 3);
    CHECK(v == 2);
    CHECK(c.instance.has_element("b"));
    CHECK(evaluate(*builtin_query("rpq2"), c.instance));
}

TEST_CASE("fine dissociation and explosion") {
    auto m0 = fixtures::m0();
    CHECK(fine_dissociation(m0.instance, m0.edge) == parse_instance("R(a,a)\nS(a,b#1)\nS(a#1,b)\nT(b,b)"));
    CHECK_THROWS_AS(fine_dissociation(parse_instance("S(a,b)"), {"a", "b"}), PreconditionError);
    auto f4 = fixtures::figure4a();
    DissociationOptions choice{false, f4.f_left, f4.f_right};
    CHECK(explosion(f4.instance, f4.edge, 0, choice) == fine_dissociation(f4.instance, f4.edge, choice));
    CHECK_THROWS_AS(explosion(f4.instance, f4.edge, 3, choice), PreconditionError);
    CHECK(explosion(f4.instance, f4.edge, 2, choice) == fixtures::figure4c_explosion());
}
