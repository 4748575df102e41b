#pragma once

#include "urlab/hard_problems.hpp"
#include "urlab/instance.hpp"
#include "urlab/query.hpp"
#include "urlab/structure.hpp"

#include <string>
#include <vector>

/// Worked examples and figure transcriptions used by tests and `verify`.
namespace urlab::fixtures {

struct EdgeExample {
    Instance instance;
    Edge edge;
};

/// {R(a,a), S(a,b), T(b,b)} with edge (a,b)
EdgeExample m0();
/// {R(b,b), T(b,c), S(b,a), S'(b,a), U(a,b)}: edge (a,b) has weight 3
EdgeExample weight_example();
/// Garbage example: left garbage S(a,b'), right garbage S'(b,e) and S(f,b)
EdgeExample garbage_example();
/// Classification example with copies t1,t2 / w1,w2 and garbage, triangle
/// and non-isomorphic neighbours x1..x4, g1..g3
EdgeExample classification_example();

/// I' = {R(a,a), S(a,b), S'(a,b), T(b,b)} for Q'
EdgeExample q1_model();
/// I'' = {R(a,a), S(a,b), S(a',b), S(a',b'), T(b',b')}, tight edge (a',b)
EdgeExample q2_model();
/// Two-way R.S*.T model of weights (1,0): edge (c,b)
EdgeExample rpq2_model();

/// Edge with garbage on both sides, its query and the cleaned instance.
struct CleanifyExample {
    Query query;
    EdgeExample before;
    Instance expected;
};
CleanifyExample cleanify_example();

/// Non-iterable critical model with copies t1,t2 / w1,w2 and extras through
/// x1,x2,x3; F_L = Bl(u,x1), F_R = Ol(x3,v).
CriticalModel figure3a();
/// Iterable critical model: copies t,t1,t2 / w,w1,w2; F_L = S(u,t),
/// F_R = S(w,v).
CriticalModel figure4a();

/// Hand transcriptions of the constructed instances.
Instance figure3b_iteration();
Instance figure3c_saturated();
BipartiteGraph figure3c_graph();
Instance figure4a_iteration();
Instance figure4b_coding();
STGraph figure4b_graph();
Instance figure4c_fine();
Instance figure4c_explosion();

} // namespace urlab::fixtures
