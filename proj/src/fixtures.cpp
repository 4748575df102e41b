#include "urlab/fixtures.hpp"

namespace urlab::fixtures {

EdgeExample m0() { return {parse_instance("R(a,a)\nS(a,b)\nT(b,b)\n"), {"a", "b"}}; }

EdgeExample weight_example() {
    return {parse_instance("R(b,b)\nT(b,c)\nS(b,a)\nS'(b,a)\nU(a,b)\n"), {"a", "b"}};
}

EdgeExample garbage_example() {
    return {parse_instance(R"(S(a,b')
U(a,a)
S(a,b)
S'(b,a)
T(c,b)
S(c,b)
S'(d,b)
S'(b,e)
S(f,b)
)"),
            {"a", "b"}};
}

EdgeExample classification_example() {
    return {parse_instance(R"(
S(u,v)
S'(u,v)
% copies
S(u,t1)
S'(u,t1)
S(u,t2)
S'(u,t2)
S(w1,v)
S'(w1,v)
S(w2,v)
S'(w2,v)
% strict subsets of the covering facts
S(u,g1)
S(u,g2)
S(g2,v)
S(g3,v)
% not isomorphic to the covering facts
B(u,x1)
% triangles
S(u,x2)
S'(u,x2)
S(x2,v)
S'(x2,v)
Bl(u,x3)
B(x3,v)
S(u,x4)
S(x4,v)
S'(x4,v)
)"),
            {"u", "v"}};
}

EdgeExample q1_model() { return {parse_instance("R(a,a)\nS(a,b)\nS'(a,b)\nT(b,b)\n"), {"a", "b"}}; }

EdgeExample q2_model() {
    return {parse_instance("R(a,a)\nS(a,b)\nS(a',b)\nS(a',b')\nT(b',b')\n"), {"a'", "b"}};
}

EdgeExample rpq2_model() {
    return {parse_instance("R(a,a)\nS(a,b)\nS(c,b)\nS(c,d)\nT(d,d)\n"), {"c", "b"}};
}

CleanifyExample cleanify_example() {
    CleanifyExample ex;
    ex.query = parse_query("ucq: S(x,y),S'(x,y),S(x,t1),S'(x,t1),B(x,t2),S(w1,y),S'(w1,y),B(w2,y)");
    ex.before = {parse_instance(R"(
S(u,v)
S'(u,v)
S(u,t1)
S'(u,t1)
B(u,t2)
S(w1,v)
S'(w1,v)
B(w2,v)
S(u,x1)
X(x1,x1)
S(y1,v)
Y(y1,y1)
)"),
                 {"u", "v"}};
    ex.expected = parse_instance(R"(
S(u,v)
S'(u,v)
S(u,t1)
S'(u,t1)
B(u,t2)
S(w1,v)
S'(w1,v)
B(w2,v)
S(u#1,x1)
X(x1,x1)
S(y1,v#1)
Y(y1,y1)
)");
    return ex;
}

namespace {

const char *kFigure3aFacts = R"(
S(u,v)
S(u,t1)
S(u,t2)
S(w1,v)
S(w2,v)
Bl(u,x1)
Bl(u,x2)
Ol(x2,v)
Ol(x3,v)
K(x1,x2)
K(x2,x3)
K(x1,x3)
P(t1,t2)
P(w1,w2)
P(t2,w2)
P(x1,t1)
P(x3,w1)
)";

const char *kFigure4aFacts = R"(
S(u,v)
S(u,t)
S(u,t1)
S(u,t2)
S(w,v)
S(w1,v)
S(w2,v)
)";

} // namespace

CriticalModel figure3a() {
    CriticalModel cm;
    cm.instance = parse_instance(kFigure3aFacts);
    cm.edge = {"u", "v"};
    cm.f_left = parse_fact("Bl(u,x1)");
    cm.f_right = parse_fact("Ol(x3,v)");
    cm.weights = weights_of(analyze_edge(cm.instance, cm.edge));
    cm.size_bound = cm.instance.size();
    cm.domain_bound = cm.instance.domain().size();
    return cm;
}

CriticalModel figure4a() {
    CriticalModel cm;
    cm.instance = parse_instance(kFigure4aFacts);
    cm.edge = {"u", "v"};
    cm.f_left = parse_fact("S(u,t)");
    cm.f_right = parse_fact("S(w,v)");
    cm.weights = weights_of(analyze_edge(cm.instance, cm.edge));
    cm.size_bound = cm.instance.size();
    cm.domain_bound = cm.instance.domain().size();
    return cm;
}

Instance figure3b_iteration() {
    // u' = u#1 and v' = v#1; the dashed facts Bl(u',x1) and Ol(x3,v') are
    // left out
    return parse_instance(R"(
S(u,v#1)
S(u#1,v#1)
S(u#1,v)
Bl(u,x1)
Bl(u,x2)
Bl(u#1,x2)
Ol(x2,v#1)
Ol(x2,v)
Ol(x3,v)
S(u,t1)
S(u,t2)
S(u#1,t1)
S(u#1,t2)
S(w1,v#1)
S(w2,v#1)
S(w1,v)
S(w2,v)
K(x1,x2)
K(x2,x3)
K(x1,x3)
P(t1,t2)
P(w1,w2)
P(t2,w2)
P(x1,t1)
P(x3,w1)
)");
}

BipartiteGraph figure3c_graph() { return {{"1", "2"}, {"1", "2"}, {{"1", "1"}, {"1", "2"}, {"2", "2"}}}; }

Instance figure3c_saturated() {
    return parse_instance(R"(
S(u_1,v_1)
S(u_1,v_2)
S(u_2,v_2)
Bl(u_1,x1)
Bl(u_1,x2)
Bl(u_2,x1)
Bl(u_2,x2)
Ol(x2,v_1)
Ol(x3,v_1)
Ol(x2,v_2)
Ol(x3,v_2)
K(x1,x2)
K(x2,x3)
K(x1,x3)
S(u_1,t1_1)
S(u_1,t1_2)
S(u_1,t1_3)
S(u_1,t2_1)
S(u_1,t2_2)
S(u_1,t2_3)
S(u_2,t1_1)
S(u_2,t1_2)
S(u_2,t1_3)
S(u_2,t2_1)
S(u_2,t2_2)
S(u_2,t2_3)
S(w1_1,v_1)
S(w1_2,v_1)
S(w1_3,v_1)
S(w2_1,v_1)
S(w2_2,v_1)
S(w2_3,v_1)
S(w1_1,v_2)
S(w1_2,v_2)
S(w1_3,v_2)
S(w2_1,v_2)
S(w2_2,v_2)
S(w2_3,v_2)
P(t1_1,t2_1)
P(t1_2,t2_2)
P(t1_3,t2_3)
P(w1_1,w2_1)
P(w1_2,w2_2)
P(w1_3,w2_3)
P(t2_1,w2_1)
P(t2_2,w2_2)
P(t2_3,w2_3)
P(x1,t1_1)
P(x1,t1_2)
P(x1,t1_3)
P(x3,w1_1)
P(x3,w1_2)
P(x3,w1_3)
)");
}

Instance figure4a_iteration() {
    // u_1..u_4 = u, u#1, u#2, u#3 and v_1..v_4 = v#1, v#2, v#3, v
    return parse_instance(R"(
S(u,v#1)
S(u#1,v#1)
S(u#1,v#2)
S(u#2,v#2)
S(u#2,v#3)
S(u#3,v#3)
S(u#3,v)
S(u,t)
S(u,t1)
S(u,t2)
S(u#1,t1)
S(u#1,t2)
S(u#2,t1)
S(u#2,t2)
S(u#3,t1)
S(u#3,t2)
S(w1,v#1)
S(w2,v#1)
S(w1,v#2)
S(w2,v#2)
S(w1,v#3)
S(w2,v#3)
S(w1,v)
S(w2,v)
S(w,v)
)");
}

STGraph figure4b_graph() { return make_stgraph({"a", "r", "s"}, {{"r", "s"}, {"a", "r"}, {"a", "s"}}, "r", "s"); }

Instance figure4b_coding() {
    return parse_instance(R"(
S(u_r,v_a-r_r)
S(u_r,v_r-s_r)
S(u_a-r,v_a-r_r)
S(u_a-r,v_a-r_a)
S(u_a-s,v_a-s_s)
S(u_a-s,v_a-s_a)
S(u_r-s,v_r-s_r)
S(u_r-s,v_r-s_s)
S(u_a,v_a-r_a)
S(u_a,v_a-s_a)
S(u_s,v_r-s_s)
S(u_s,v_a-s_s)
S(u_s,v)
S(u_r,t)
S(u_r,t1)
S(u_r,t2)
S(u_a,t1)
S(u_a,t2)
S(u_s,t1)
S(u_s,t2)
S(u_a-s,t1)
S(u_a-s,t2)
S(u_r-s,t1)
S(u_r-s,t2)
S(u_a-r,t1)
S(u_a-r,t2)
S(w1,v_a-r_r)
S(w2,v_a-r_r)
S(w1,v_a-r_a)
S(w2,v_a-r_a)
S(w1,v_a-s_a)
S(w2,v_a-s_a)
S(w1,v_a-s_s)
S(w2,v_a-s_s)
S(w1,v_r-s_r)
S(w2,v_r-s_r)
S(w1,v_r-s_s)
S(w2,v_r-s_s)
S(w1,v)
S(w2,v)
S(w,v)
)");
}

Instance figure4c_fine() {
    // u' = u#1, v' = v#1, dashed S(u',t) and S(w,v') left out
    return parse_instance(R"(
S(u,v#1)
S(u#1,v)
S(u,t)
S(u,t1)
S(u,t2)
S(u#1,t1)
S(u#1,t2)
S(w,v)
S(w1,v)
S(w2,v)
S(w1,v#1)
S(w2,v#1)
)");
}

Instance figure4c_explosion() {
    // middles u_1 = u#2 (with t1) and u_2 = u#3 (with t2)
    return parse_instance(R"(
S(u,v#1)
S(u#2,v#1)
S(u#3,v#1)
S(u#2,v)
S(u#3,v)
S(u#1,v)
S(u,t)
S(u,t1)
S(u,t2)
S(u#2,t1)
S(u#3,t2)
S(u#1,t1)
S(u#1,t2)
S(w,v)
S(w1,v)
S(w2,v)
S(w1,v#1)
S(w2,v#1)
)");
}

} // namespace urlab::fixtures
