// urlab command-line driver.

#include "urlab/error.hpp"
#include "urlab/hard_problems.hpp"
#include "urlab/instance.hpp"
#include "urlab/kernels.hpp"
#include "urlab/query.hpp"
#include "urlab/reductions.hpp"
#include "urlab/reliability.hpp"
#include "urlab/structure.hpp"
#include "urlab/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace urlab;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;
constexpr int kExitInternal = 4;

struct UsageError : Error {
    using Error::Error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Shared state for one invocation: inputs read so far and the report under
// construction.
struct Run {
    std::vector<std::string> argv;
    json inputs = json::object();
    json params = json::object();
    json results = json::object();
    std::string text;
    bool as_json = false;
    bool dot = false;
    std::size_t workers = 1;
    std::size_t cap = 0;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    std::string load(const std::string &role, const std::string &path) {
        std::string bytes = read_file(path);
        inputs[role] = {{"path", path}, {"fnv1a", fnv1a(bytes)}};
        return bytes;
    }

    Query query(const std::string &source) {
        if (auto q = builtin_query(source)) {
            inputs["query"] = {{"builtin", source}, {"fnv1a", fnv1a(source)}};
            return *q;
        }
        std::string text = load("query", source);
        std::string trimmed = text;
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
            trimmed.pop_back();
        if (auto q = builtin_query(trimmed))
            return *q;
        return parse_query(text);
    }

    Instance instance(const std::string &path) {
        std::string bytes = load("instance", path);
        return ends_with(path, ".json") ? instance_from_json(json::parse(bytes)) : parse_instance(bytes);
    }

    TID tid(const std::string &path, const std::string &fallback) {
        std::string bytes = load("tid", path);
        if (ends_with(path, ".json"))
            return tid_from_json(json::parse(bytes));
        std::optional<Probability> fb;
        if (!fallback.empty())
            fb = Probability::parse(fallback);
        return parse_tid(bytes, fb);
    }

    STGraph stgraph(const std::string &path) {
        std::string bytes = load("graph", path);
        return ends_with(path, ".json") ? stgraph_from_json(json::parse(bytes)) : parse_stgraph(bytes);
    }

    BipartiteGraph bipartite(const std::string &path) {
        std::string bytes = load("graph", path);
        BipartiteGraph g = bipartite_from_json(json::parse(bytes));
        g.validate();
        return g;
    }

    json report() const {
        json cmd = json::array();
        for (const auto &a : argv)
            cmd.push_back(a);
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return {{"command", cmd},
                {"inputs", inputs},
                {"parameters", params},
                {"results", results},
                {"timing", {{"seconds", seconds}, {"isa", kernels::isa_name(kernels::active_isa())}}}};
    }
};

Edge parse_edge(const std::string &text) {
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw UsageError("edge must be written u,v");
    Edge e{text.substr(0, comma), text.substr(comma + 1)};
    if (!is_identifier(e.left) || !is_identifier(e.right) || e.left == e.right)
        throw UsageError("bad edge '" + text + "'");
    return e;
}

std::optional<Fact> optional_fact(const std::string &text) {
    if (text.empty())
        return std::nullopt;
    return parse_fact(text);
}

// Instance output for the gadget subcommands: text (or DOT) on stdout,
// optionally an instance file plus a role map next to it.
void emit_instance(Run &run, const Instance &inst, const std::string &output, const FactRoleMap *roles = nullptr) {
    run.results["instance"] = instance_to_json(inst);
    run.results["facts"] = inst.size();
    if (roles)
        run.results["roles"] = to_json(*roles);
    if (!output.empty()) {
        std::ofstream(output) << serialize_instance(inst);
        if (roles)
            std::ofstream(output + ".roles.json") << to_json(*roles).dump(2) << "\n";
    }
    run.text = run.dot ? instance_to_dot(inst) : serialize_instance(inst);
}

struct Options {
    std::string query, instance, tid, graph, edge, fallback, output;
    std::string lambda = "1/2", mu = "1/2", nu = "1/2", phi = "1/2", eta = "1/2";
    std::string f_left, f_right, policy = "pinned", oracle = "collapsed";
    std::uint64_t samples = 10000, seed = 7;
    std::size_t size_bound = 8, domain_bound = 8, max_candidates = 500000;
    std::size_t trials = 200, max_facts_verify = 12;
    unsigned k = 2, n = 2;
    bool direct = false, via_pqe = false, unchecked = false, include_dashed = false, list = false;
    std::string suite;
};

void add_query(CLI::App *cmd, Options &o) {
    cmd->add_option("--query", o.query, "query file or builtin name (q0, q1, q2, rpq1, rpq2)")->required();
}
void add_instance(CLI::App *cmd, Options &o) {
    cmd->add_option("--instance", o.instance, "instance file (.inst text or .json)")->required();
}
void add_edge(CLI::App *cmd, Options &o) { cmd->add_option("--edge", o.edge, "edge as u,v")->required(); }
void add_choice(CLI::App *cmd, Options &o) {
    cmd->add_option("--f-left", o.f_left, "left incident fact F_L, e.g. 'S(u,t)'");
    cmd->add_option("--f-right", o.f_right, "right incident fact F_R");
}
void add_output(CLI::App *cmd, Options &o) {
    cmd->add_option("--output", o.output, "also write the instance here (roles go to <output>.roles.json)");
}

int dispatch(int argc, char **argv) {
    CLI::App app{"urlab: uniform reliability and probabilistic query evaluation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Run run;
    for (int i = 0; i < argc; ++i)
        run.argv.emplace_back(argv[i]);
    std::size_t max_facts = default_max_facts();
    app.add_flag("--json", run.as_json, "print the full JSON report");
    app.add_flag("--dot", run.dot, "print instances in DOT format");
    app.add_option("--workers", run.workers, "worker threads for enumeration")->check(CLI::Range(1, 256));
    app.add_option("--max-facts", max_facts, "cap on enumerated facts")->check(CLI::Range(1, 64));

    Options o;
    auto *eval = app.add_subcommand("eval", "does the instance satisfy the query");
    add_query(eval, o);
    add_instance(eval, o);

    auto *ur = app.add_subcommand("ur", "number of satisfying subinstances");
    add_query(ur, o);
    add_instance(ur, o);

    auto *pqe_cmd = app.add_subcommand("pqe", "exact probability on a TID");
    add_query(pqe_cmd, o);
    pqe_cmd->add_option("--tid", o.tid, "TID file (lines 'R(a,b) p' or .json)")->required();
    pqe_cmd->add_option("--default-prob", o.fallback, "probability for lines without one");
    pqe_cmd->add_flag("--direct", o.direct, "sum over subinstances without the satisfaction map");

    auto *mc = app.add_subcommand("mc", "Monte Carlo estimate on a TID");
    add_query(mc, o);
    mc->add_option("--tid", o.tid, "TID file")->required();
    mc->add_option("--default-prob", o.fallback, "probability for lines without one");
    mc->add_option("--samples", o.samples, "number of samples")->check(CLI::PositiveNumber);
    mc->add_option("--seed", o.seed, "RNG seed");

    auto *analyze = app.add_subcommand("analyze", "edge report: covering, garbage, copy and extra facts");
    add_instance(analyze, o);
    add_edge(analyze, o);
    analyze->add_option("--query", o.query, "also report whether the edge is tight for this query");

    auto *critical = app.add_subcommand("critical", "search for a critical model");
    add_query(critical, o);
    critical->add_option("--size-bound", o.size_bound, "largest candidate model (facts)");
    critical->add_option("--domain-bound", o.domain_bound, "largest candidate domain");
    critical->add_option("--max-candidates", o.max_candidates, "distinct images examined before giving up");

    auto *pp2dnf = app.add_subcommand("pp2dnf", "#PP2DNF probability of a bipartite graph");
    pp2dnf->add_option("--lambda", o.lambda, "U-vertex probability");
    pp2dnf->add_option("--mu", o.mu, "edge probability");
    pp2dnf->add_option("--nu", o.nu, "V-vertex probability");
    pp2dnf->add_option("--graph", o.graph, "bipartite graph JSON {U,V,E}")->required();
    pp2dnf->add_flag("--via-pqe", o.via_pqe, "compute as pqe of R(x,x),S(x,y),T(y,y)");
    pp2dnf->add_flag("--unchecked", o.unchecked, "lift the item cap");

    auto *ustcon = app.add_subcommand("ustcon", "probability that r and s are kept and connected");
    ustcon->add_option("--phi", o.phi, "vertex probability");
    ustcon->add_option("--eta", o.eta, "edge probability");
    ustcon->add_option("--graph", o.graph, "graph file ('st r s' text or .json)")->required();
    ustcon->add_flag("--unchecked", o.unchecked, "lift the item cap");

    auto *reduce = app.add_subcommand("reduce", "reductions and gadget constructions");
    reduce->require_subcommand(1);
    auto *node = reduce->add_subcommand("node-pipeline", "recover good-subset counts by interpolation");
    node->add_option("--graph", o.graph, "graph file")->required();
    node->add_option("--phi", o.phi, "vertex probability");
    node->add_option("--oracle", o.oracle, "collapsed or brute-force")
        ->check(CLI::IsMember({"collapsed", "brute-force"}));
    auto *sat = reduce->add_subcommand("saturation-pipeline", "recover ustcon(phi,1) from one oracle call");
    sat->add_option("--graph", o.graph, "graph file")->required();
    sat->add_option("--phi", o.phi, "vertex probability");
    sat->add_option("--eta", o.eta, "edge probability");
    sat->add_option("--oracle", o.oracle, "collapsed or brute-force")
        ->check(CLI::IsMember({"collapsed", "brute-force"}));
    auto *iterate = reduce->add_subcommand("iterate", "iterate a model along an edge");
    add_instance(iterate, o);
    add_edge(iterate, o);
    add_choice(iterate, o);
    add_output(iterate, o);
    iterate->add_option("--k", o.k, "chain length")->check(CLI::PositiveNumber);
    iterate->add_option("--policy", o.policy, "pinned, include-dashed or endpoints-only");
    iterate->add_option("--query", o.query, "also report whether the iteration satisfies this query");
    auto *code_b = reduce->add_subcommand("code-bipartite", "saturated coding of a bipartite graph");
    add_query(code_b, o);
    add_instance(code_b, o);
    add_edge(code_b, o);
    add_choice(code_b, o);
    add_output(code_b, o);
    code_b->add_option("--graph", o.graph, "bipartite graph JSON")->required();
    code_b->add_option("--n", o.n, "replication factor N")->check(CLI::PositiveNumber);
    auto *code_g = reduce->add_subcommand("code-graph", "iterable coding of an s-t graph");
    add_query(code_g, o);
    add_instance(code_g, o);
    add_edge(code_g, o);
    add_choice(code_g, o);
    add_output(code_g, o);
    code_g->add_option("--graph", o.graph, "graph file")->required();
    auto *fine = reduce->add_subcommand("fine-dissoc", "fine dissociation of an edge");
    add_instance(fine, o);
    add_edge(fine, o);
    add_choice(fine, o);
    add_output(fine, o);
    fine->add_flag("--include-dashed", o.include_dashed, "also copy F_L and F_R");
    auto *explode = reduce->add_subcommand("explode", "explosion of an edge with k middle elements");
    add_instance(explode, o);
    add_edge(explode, o);
    add_choice(explode, o);
    add_output(explode, o);
    explode->add_option("--k", o.k, "number of middle elements");
    explode->add_flag("--include-dashed", o.include_dashed, "also copy F_L and F_R");

    auto *verify = app.add_subcommand("verify", "run a named verification suite");
    verify->add_option("suite", o.suite, "suite name");
    verify->add_flag("--list", o.list, "list the suites");
    verify->add_option("--trials", o.trials, "random cases per suite");
    verify->add_option("--seed", o.seed, "RNG seed");
    verify->add_option("--max-facts", o.max_facts_verify, "largest random instance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    if (max_facts > kHardMaxFacts && !verify->parsed())
        throw UsageError("--max-facts above the hard limit " + std::to_string(kHardMaxFacts));
    run.cap = max_facts;
    run.params["workers"] = run.workers;
    run.params["max_facts"] = run.cap;

    int status = 0;
    if (eval->parsed()) {
        Query q = run.query(o.query);
        bool holds = evaluate(q, run.instance(o.instance));
        run.results["holds"] = holds;
        run.text = holds ? "true" : "false";
    } else if (ur->parsed()) {
        Query q = run.query(o.query);
        BigInt count = ur_count(q, run.instance(o.instance), run.workers, run.cap);
        run.results["ur"] = count.get_str();
        run.text = count.get_str();
    } else if (pqe_cmd->parsed()) {
        Query q = run.query(o.query);
        TID tid = run.tid(o.tid, o.fallback);
        Probability p = o.direct ? pqe_direct(q, tid, run.cap) : pqe(q, tid, run.workers, run.cap);
        run.params["method"] = o.direct ? "direct" : "satisfaction-map";
        run.results["pqe"] = p.str();
        run.text = p.str();
    } else if (mc->parsed()) {
        Query q = run.query(o.query);
        TID tid = run.tid(o.tid, o.fallback);
        McEstimate est = mc_estimate(q, tid, o.samples, o.seed);
        run.params["samples"] = o.samples;
        run.params["seed"] = o.seed;
        run.results = {{"estimate", est.estimate}, {"half_width", est.half_width},
                       {"hits", est.hits},         {"samples", est.samples},
                       {"confidence", 0.95}};
        std::ostringstream s;
        s << est.estimate << " +- " << est.half_width;
        run.text = s.str();
    } else if (analyze->parsed()) {
        Instance inst = run.instance(o.instance);
        Edge e = parse_edge(o.edge);
        EdgeAnalysis a = analyze_edge(inst, e);
        run.results["analysis"] = to_json(a);
        if (!o.query.empty() && a.non_leaf())
            run.results["tight"] = is_tight(run.query(o.query), inst, e);
        run.text = run.results.dump(2);
    } else if (critical->parsed()) {
        Query q = run.query(o.query);
        CriticalSearchOptions opts{o.size_bound, o.domain_bound, o.max_candidates};
        run.params["size_bound"] = o.size_bound;
        run.params["domain_bound"] = o.domain_bound;
        run.params["max_candidates"] = o.max_candidates;
        CriticalSearchReport report = find_critical_model(q, opts);
        run.results = to_json(report);
        if (report.model) {
            const auto &w = report.model->weights;
            run.text = "weights (" + std::to_string(w.theta) + "," + std::to_string(w.xi) + ") lex (" +
                       std::to_string(w.tau) + "," + std::to_string(w.omega) + ") edge " +
                       to_string(report.model->edge) + "\n" + serialize_instance(report.model->instance);
            if (run.dot)
                run.text = instance_to_dot(report.model->instance);
        } else {
            run.text = "no tight edge within the bounds";
        }
    } else if (pp2dnf->parsed()) {
        BipartiteGraph g = run.bipartite(o.graph);
        auto l = Probability::parse(o.lambda), m = Probability::parse(o.mu), n = Probability::parse(o.nu);
        run.params["lambda"] = l.str();
        run.params["mu"] = m.str();
        run.params["nu"] = n.str();
        run.params["method"] = o.via_pqe ? "pqe" : "enumeration";
        Probability p = o.via_pqe ? pp2dnf_as_pqe(l, m, n, g, o.unchecked) : pp2dnf_prob(l, m, n, g, o.unchecked);
        run.results["probability"] = p.str();
        run.text = p.str();
    } else if (ustcon->parsed()) {
        STGraph g = run.stgraph(o.graph);
        auto phi = Probability::parse(o.phi), eta = Probability::parse(o.eta);
        run.params["phi"] = phi.str();
        run.params["eta"] = eta.str();
        Probability p = ustcon_prob(phi, eta, g, o.unchecked);
        run.results["probability"] = p.str();
        run.text = p.str();
    } else if (reduce->parsed()) {
        const bool brute = o.oracle == "brute-force";
        if (node->parsed()) {
            STGraph g = run.stgraph(o.graph);
            auto phi = Probability::parse(o.phi);
            run.params["phi"] = phi.str();
            run.params["oracle"] = o.oracle;
            auto result = brute ? node_connectedness_pipeline(g, phi, brute_force_node_oracle)
                                : node_connectedness_pipeline(g, phi);
            run.results = to_json(result);
            run.text = result.total.get_str();
        } else if (sat->parsed()) {
            STGraph g = run.stgraph(o.graph);
            auto phi = Probability::parse(o.phi), eta = Probability::parse(o.eta);
            run.params["phi"] = phi.str();
            run.params["eta"] = eta.str();
            run.params["oracle"] = o.oracle;
            auto result =
                brute ? saturation_pipeline(g, phi, eta, brute_force_path_oracle) : saturation_pipeline(g, phi, eta);
            run.results = to_json(result);
            run.text = result.z.get_str();
        } else if (iterate->parsed()) {
            Instance inst = run.instance(o.instance);
            Edge e = parse_edge(o.edge);
            IterationOptions opts{parse_iteration_policy(o.policy), optional_fact(o.f_left), optional_fact(o.f_right)};
            run.params["k"] = o.k;
            run.params["policy"] = policy_name(opts.policy);
            Instance out = iterate_model(inst, e, o.k, opts);
            emit_instance(run, out, o.output);
            if (!o.query.empty())
                run.results["satisfies_query"] = evaluate(run.query(o.query), out);
        } else if (code_b->parsed() || code_g->parsed()) {
            Query q = run.query(o.query);
            Instance inst = run.instance(o.instance);
            CriticalModel cm =
                make_critical_model(q, inst, parse_edge(o.edge), optional_fact(o.f_left), optional_fact(o.f_right));
            run.params["f_left"] = to_string(cm.f_left);
            run.params["f_right"] = to_string(cm.f_right);
            Coding coding;
            if (code_b->parsed()) {
                run.params["n"] = o.n;
                coding = saturated_coding(cm, run.bipartite(o.graph), o.n);
            } else {
                coding = iterable_coding(cm, run.stgraph(o.graph));
            }
            emit_instance(run, coding.instance, o.output, &coding.roles);
        } else if (fine->parsed() || explode->parsed()) {
            Instance inst = run.instance(o.instance);
            Edge e = parse_edge(o.edge);
            DissociationOptions opts{o.include_dashed, optional_fact(o.f_left), optional_fact(o.f_right)};
            run.params["include_dashed"] = o.include_dashed;
            if (explode->parsed())
                run.params["k"] = o.k;
            Instance out = fine->parsed() ? fine_dissociation(inst, e, opts) : explosion(inst, e, o.k, opts);
            emit_instance(run, out, o.output);
        }
    } else if (verify->parsed()) {
        if (o.list) {
            json list = json::array();
            for (const auto &name : suite_names()) {
                list.push_back({{"suite", name}, {"description", suite_description(name)}});
                run.text += name + "  " + suite_description(name) + "\n";
            }
            run.results["suites"] = list;
            if (!run.text.empty())
                run.text.pop_back();
        } else {
            if (o.suite.empty())
                throw UsageError("verify needs a suite name or --list");
            SuiteOptions opts;
            opts.max_facts = o.max_facts_verify;
            opts.trials = o.trials;
            opts.seed = o.seed;
            opts.workers = run.workers;
            run.params["trials"] = o.trials;
            run.params["seed"] = o.seed;
            run.params["max_facts"] = o.max_facts_verify;
            SuiteResult r = run_suite(o.suite, opts);
            run.results = to_json(r);
            std::ostringstream s;
            for (const auto &c : r.checks)
                s << (c.ok ? "ok   " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
            s << (r.passed ? "PASS " : "FAIL ") << r.suite << " (" << r.seconds << " s)";
            run.text = s.str();
            status = r.passed ? 0 : 1;
        }
    }

    if (run.as_json)
        std::cout << run.report().dump(2) << "\n";
    else
        std::cout << run.text << "\n";
    return status;
}

} // namespace

int main(int argc, char **argv) {
    try {
        return dispatch(argc, argv);
    } catch (const CapExceeded &e) {
        std::cerr << "urlab: " << e.what() << "\n";
        return kExitCap;
    } catch (const InternalError &e) {
        std::cerr << "urlab: internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error &e) {
        std::cerr << "urlab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception &e) {
        std::cerr << "urlab: bad JSON: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "urlab: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
