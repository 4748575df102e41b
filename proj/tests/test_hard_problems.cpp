#include "urlab/error.hpp"
#include "urlab/hard_problems.hpp"

#include <doctest.h>

using namespace urlab;

namespace {
Probability p(const char *text) { return Probability::parse(text); }
} // namespace

TEST_CASE("pp2dnf") {
    BipartiteGraph single{{"u"}, {"v"}, {{"u", "v"}}};
    CHECK(pp2dnf_prob(p("1/2"), p("1/2"), p("1/2"), single).str() == "1/8");
    CHECK(pp2dnf_as_pqe(p("1/2"), p("1/2"), p("1/2"), single).str() == "1/8");
    BipartiteGraph shared{{"u1", "u2"}, {"v"}, {{"u1", "v"}, {"u2", "v"}}};
    // nu (1 - (1 - lambda mu)^2) with lambda mu = 1/6, nu = 1/2
    CHECK(pp2dnf_prob(p("1/3"), p("1/2"), p("1/2"), shared).str() == "11/72");
    CHECK(pp2dnf_prob(p("1/3"), p("1/2"), p("1/2"), BipartiteGraph{{"u"}, {"v"}, {}}).is_zero());
    BipartiteGraph same_labels{{"1", "2"}, {"1"}, {{"1", "1"}, {"2", "1"}}};
    CHECK(pp2dnf_prob(p("1/3"), p("1/2"), p("1/2"), same_labels) ==
          pp2dnf_as_pqe(p("1/3"), p("1/2"), p("1/2"), same_labels));
    CHECK_THROWS_AS((BipartiteGraph{{"u"}, {"v"}, {{"v", "u"}}}.validate()), PreconditionError);
    CHECK(bipartite_from_json(to_json(shared)).E == shared.E);
}

TEST_CASE("pp2dnf item cap") {
    BipartiteGraph big;
    for (int k = 0; k < 14; ++k) {
        big.U.push_back("u" + std::to_string(k));
        big.V.push_back("v" + std::to_string(k));
    }
    CHECK_THROWS_AS(pp2dnf_prob(p("1/2"), p("1/2"), p("1/2"), big), CapExceeded);
}

TEST_CASE("ustcon") {
    STGraph edge = make_stgraph({"r", "s"}, {{"r", "s"}}, "r", "s");
    CHECK(ustcon_prob(p("1/2"), p("1/3"), edge).str() == "1/12");
    STGraph path = make_stgraph({"r", "a", "s"}, {{"r", "a"}, {"a", "s"}}, "r", "s");
    CHECK(ustcon_prob(p("1/2"), p("1/3"), path).str() == "1/72");
    STGraph tri = make_stgraph({"r", "a", "s"}, {{"r", "a"}, {"a", "s"}, {"r", "s"}}, "r", "s");
    // classic two-terminal reliability with edges at 1/2: 1 - (1/2)(3/4)
    CHECK(ustcon_prob(p("1"), p("1/2"), tri).str() == "5/8");
    CHECK(ustcon_prob(p("1/2"), p("1"), tri).str() == "1/4");
    STGraph apart = make_stgraph({"r", "s"}, {}, "r", "s");
    CHECK(ustcon_prob(p("1/2"), p("1/2"), apart).is_zero());
}

TEST_CASE("s-t graph formats") {
    STGraph g = parse_stgraph("st r s\nr a\na s\nb\n");
    CHECK(g.vertices.size() == 4);
    CHECK(g.edges.size() == 2);
    STGraph h = parse_stgraph(serialize_stgraph(g));
    CHECK(h.vertices == g.vertices);
    CHECK(h.edges == g.edges);
    CHECK(stgraph_from_json(to_json(g)).edges == g.edges);
    CHECK_THROWS_AS(parse_stgraph("r a\n"), ParseError);
    CHECK_THROWS_AS(make_stgraph({"r"}, {}, "r", "r"), PreconditionError);
}

TEST_CASE("st_reliability with mixed weights") {
    STGraph tri = make_stgraph({"r", "a", "s"}, {{"r", "a"}, {"a", "s"}, {"r", "s"}}, "r", "s");
    std::vector<Probability> vp(3, Probability::one()), ep(3, Probability::half());
    CHECK(st_reliability(tri, vp, ep) == ustcon_prob(Probability::one(), Probability::half(), tri));
}
