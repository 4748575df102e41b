#include "urlab/query.hpp"

#include "urlab/error.hpp"
#include "urlab/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>

namespace urlab {

// ---------------------------------------------------------------------------
// Regex printing

namespace {

int precedence(const Regex &r) {
    switch (r.kind) {
    case Regex::Kind::Alt:
        return 0;
    case Regex::Kind::Concat:
        return 1;
    default:
        return 2;
    }
}

std::string print(const Regex &r, int context) {
    std::string out;
    switch (r.kind) {
    case Regex::Kind::Symbol:
        return r.symbol;
    case Regex::Kind::Star:
    case Regex::Kind::Plus:
        out = print(r.children[0], 3) + (r.kind == Regex::Kind::Star ? "*" : "+");
        return out;
    case Regex::Kind::Concat:
    case Regex::Kind::Alt: {
        const char *sep = r.kind == Regex::Kind::Concat ? " . " : " | ";
        for (std::size_t i = 0; i < r.children.size(); ++i) {
            if (i)
                out += sep;
            out += print(r.children[i], precedence(r) + 1);
        }
        break;
    }
    }
    if (precedence(r) < context)
        return "(" + out + ")";
    return out;
}

void collect_symbols(const Regex &r, std::set<std::string> &out) {
    if (r.kind == Regex::Kind::Symbol)
        out.insert(r.symbol);
    for (const auto &c : r.children)
        collect_symbols(c, out);
}

Regex rename_symbols(const Regex &r, const std::set<std::string> &unary) {
    Regex out = r;
    if (out.kind == Regex::Kind::Symbol && unary.contains(out.symbol))
        out.symbol = primed(out.symbol);
    for (auto &c : out.children)
        c = rename_symbols(c, unary);
    return out;
}

} // namespace

std::string to_string(const Regex &regex) { return print(regex, 0); }

std::set<std::string> regex_symbols(const Regex &regex) {
    std::set<std::string> out;
    collect_symbols(regex, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '\'' || c == '-' ||
           c == ':' || c == '~';
}

class Cursor {
public:
    Cursor(std::string_view text, std::size_t offset) : text_(text), pos_(offset) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            fail(std::string("expected '") + c + "'");
    }
    std::string identifier() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_]))
            ++pos_;
        if (start == pos_)
            fail("expected an identifier");
        return std::string(text_.substr(start, pos_ - start));
    }
    [[noreturn]] void fail(const std::string &what) {
        std::string got = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
        throw ParseError(what + ", got " + got, line_of(), column_of());
    }

private:
    std::size_t line_of() const {
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<long>(std::min(pos_, text_.size())), '\n'));
    }
    std::size_t column_of() const {
        std::size_t p = std::min(pos_, text_.size());
        std::size_t nl = text_.rfind('\n', p == 0 ? 0 : p - 1);
        if (p == 0 || nl == std::string_view::npos)
            return p + 1;
        return p - nl;
    }

    std::string_view text_;
    std::size_t pos_;
};

Instance parse_cq(Cursor &c) {
    std::vector<Fact> atoms;
    do {
        std::string rel = c.identifier();
        c.expect('(');
        std::string a = c.identifier();
        std::string b = a;
        if (c.accept(','))
            b = c.identifier();
        c.expect(')');
        atoms.push_back({rel, a, b});
    } while (c.accept(','));
    return Instance(std::move(atoms));
}

Regex parse_alt(Cursor &c);

Regex parse_postfix(Cursor &c) {
    Regex base;
    if (c.accept('(')) {
        base = parse_alt(c);
        c.expect(')');
    } else {
        base.kind = Regex::Kind::Symbol;
        base.symbol = c.identifier();
    }
    for (;;) {
        if (c.accept('*')) {
            base = Regex{Regex::Kind::Star, {}, {base}};
        } else if (c.accept('+')) {
            base = Regex{Regex::Kind::Plus, {}, {base}};
        } else {
            return base;
        }
    }
}

Regex parse_concat(Cursor &c) {
    std::vector<Regex> parts{parse_postfix(c)};
    for (;;) {
        if (c.accept('.')) {
            parts.push_back(parse_postfix(c));
            continue;
        }
        char n = c.peek();
        if (n == '(' || ident_char(n)) {
            parts.push_back(parse_postfix(c));
            continue;
        }
        break;
    }
    if (parts.size() == 1)
        return parts.front();
    return Regex{Regex::Kind::Concat, {}, std::move(parts)};
}

Regex parse_alt(Cursor &c) {
    std::vector<Regex> parts{parse_concat(c)};
    while (c.accept('|'))
        parts.push_back(parse_concat(c));
    if (parts.size() == 1)
        return parts.front();
    return Regex{Regex::Kind::Alt, {}, std::move(parts)};
}

std::string strip_comments(std::string_view text) {
    std::string out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        if (auto cut = line.find("//"); cut != std::string_view::npos)
            line = line.substr(0, cut);
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first != std::string_view::npos && line[first] == '%')
            line = {};
        out.append(line);
        out.push_back('\n');
        if (end == text.size())
            break;
        pos = end + 1;
    }
    return out;
}

} // namespace

Query parse_query(std::string_view source) {
    std::string text = strip_comments(source);
    std::size_t colon = text.find(':');
    std::size_t bracket = text.find('[');
    std::size_t header_end = colon;
    if (bracket != std::string::npos && bracket < colon) {
        std::size_t close = text.find(']', bracket);
        if (close == std::string::npos)
            throw ParseError("unterminated '[' in query header", 1, bracket + 1);
        header_end = text.find(':', close);
    }
    if (header_end == std::string::npos)
        throw ParseError("expected 'ucq:' or 'rpq:' header", 1, 1);
    std::string header(text.substr(0, header_end));
    header.erase(0, header.find_first_not_of(" \t\r\n"));
    header.erase(header.find_last_not_of(" \t\r\n") + 1);

    Cursor body(text, header_end + 1);
    Query q;
    if (header == "ucq") {
        UCQ u;
        do {
            u.disjuncts.push_back(parse_cq(body));
        } while (body.accept('|'));
        if (!body.at_end())
            body.fail("unexpected trailing input");
        q.body = std::move(u);
        return q;
    }
    if (header.rfind("rpq", 0) != 0)
        throw ParseError("unknown query kind '" + header + "'", 1, 1);
    RPQ r;
    std::string tags = header.substr(3);
    if (!tags.empty()) {
        if (tags.front() != '[' || tags.back() != ']')
            throw ParseError("malformed rpq header '" + header + "'", 1, 4);
        std::string inner = tags.substr(1, tags.size() - 2);
        std::size_t start = 0;
        while (start <= inner.size()) {
            std::size_t semi = inner.find(';', start);
            if (semi == std::string::npos)
                semi = inner.size();
            std::string item = inner.substr(start, semi - start);
            item.erase(0, item.find_first_not_of(" \t"));
            item.erase(item.find_last_not_of(" \t") + 1);
            if (item == "2way") {
                r.two_way = true;
            } else if (item == "1way") {
                r.two_way = false;
            } else if (item.rfind("start=", 0) == 0 && is_identifier(item.substr(6))) {
                r.start_tag = item.substr(6);
            } else if (item.rfind("end=", 0) == 0 && is_identifier(item.substr(4))) {
                r.end_tag = item.substr(4);
            } else {
                throw ParseError("unknown rpq tag '" + item + "'", 1, 5 + start);
            }
            start = semi + 1;
        }
    }
    r.regex = parse_alt(body);
    if (!body.at_end())
        body.fail("unexpected trailing input");
    q.body = std::move(r);
    return q;
}

std::string to_string(const Query &query) {
    if (query.is_ucq()) {
        std::string out = "ucq: ";
        const auto &u = query.ucq();
        for (std::size_t i = 0; i < u.disjuncts.size(); ++i) {
            if (i)
                out += " | ";
            bool first = true;
            for (const auto &f : u.disjuncts[i].facts()) {
                if (!first)
                    out += ",";
                first = false;
                out += to_string(f);
            }
        }
        return out;
    }
    const auto &r = query.rpq();
    std::string out = "rpq[";
    out += r.two_way ? "2way" : "1way";
    if (r.start_tag)
        out += "; start=" + *r.start_tag;
    if (r.end_tag)
        out += "; end=" + *r.end_tag;
    return out + "]: " + to_string(r.regex);
}

std::optional<Query> builtin_query(std::string_view name) {
    static const std::map<std::string, std::pair<std::string, Boundedness>, std::less<>> table = {
        {"q0", {"ucq: R(x,x),S(x,y),T(y,y)", Boundedness::Bounded}},
        {"q1", {"ucq: R(x,x),S(x,y),S'(x,y),T(y,y)", Boundedness::Bounded}},
        {"q2", {"ucq: R(x,x),S(x,y),S(z,y),S(z,w),T(w,w)", Boundedness::Bounded}},
        {"rpq1", {"rpq[1way]: R . S* . T", Boundedness::Unbounded}},
        {"rpq2", {"rpq[2way]: R . S* . T", Boundedness::Unbounded}},
    };
    auto it = table.find(name);
    if (it == table.end())
        return std::nullopt;
    Query q = parse_query(it->second.first);
    q.hint = it->second.second;
    return q;
}

std::vector<std::string> builtin_query_names() { return {"q0", "q1", "q2", "rpq1", "rpq2"}; }

Query encode_unary(const Query &query, const std::set<std::string> &unary) {
    Query out = query;
    if (query.is_ucq()) {
        UCQ u;
        for (const auto &d : query.ucq().disjuncts) {
            std::vector<Fact> atoms;
            for (const auto &f : d.facts()) {
                if (unary.contains(f.relation) && !f.is_unary())
                    throw PreconditionError("relation " + f.relation + " is used in both unary and binary atoms");
                atoms.push_back({unary.contains(f.relation) ? primed(f.relation) : f.relation, f.subject, f.object});
            }
            u.disjuncts.emplace_back(std::move(atoms));
        }
        out.body = std::move(u);
        return out;
    }
    RPQ r = query.rpq();
    r.regex = rename_symbols(r.regex, unary);
    if (r.start_tag && unary.contains(*r.start_tag))
        r.start_tag = primed(*r.start_tag);
    if (r.end_tag && unary.contains(*r.end_tag))
        r.end_tag = primed(*r.end_tag);
    out.body = std::move(r);
    return out;
}

std::set<std::string> query_relations(const Query &query) {
    std::set<std::string> out;
    if (query.is_ucq()) {
        for (const auto &d : query.ucq().disjuncts)
            for (const auto &f : d.facts())
                out.insert(f.relation);
        return out;
    }
    const auto &r = query.rpq();
    out = regex_symbols(r.regex);
    if (r.start_tag)
        out.insert(*r.start_tag);
    if (r.end_tag)
        out.insert(*r.end_tag);
    return out;
}

// ---------------------------------------------------------------------------
// Thompson automaton

namespace detail {

struct Nfa {
    struct Move {
        std::string symbol;
        int to;
    };
    std::vector<std::vector<Move>> moves;
    std::vector<std::vector<int>> eps;
    int start = 0;
    int accept = 0;
    // closure[s]: states reachable from s by epsilon moves (including s)
    std::vector<std::vector<int>> closure;

    int add() {
        moves.emplace_back();
        eps.emplace_back();
        return static_cast<int>(moves.size()) - 1;
    }

    std::pair<int, int> build(const Regex &r) {
        switch (r.kind) {
        case Regex::Kind::Symbol: {
            int a = add(), b = add();
            moves[static_cast<std::size_t>(a)].push_back({r.symbol, b});
            return {a, b};
        }
        case Regex::Kind::Concat: {
            auto [s, e] = build(r.children.front());
            for (std::size_t i = 1; i < r.children.size(); ++i) {
                auto [s2, e2] = build(r.children[i]);
                eps[static_cast<std::size_t>(e)].push_back(s2);
                e = e2;
            }
            return {s, e};
        }
        case Regex::Kind::Alt: {
            int a = add(), b = add();
            for (const auto &c : r.children) {
                auto [s, e] = build(c);
                eps[static_cast<std::size_t>(a)].push_back(s);
                eps[static_cast<std::size_t>(e)].push_back(b);
            }
            return {a, b};
        }
        case Regex::Kind::Star:
        case Regex::Kind::Plus: {
            int a = add(), b = add();
            auto [s, e] = build(r.children.front());
            eps[static_cast<std::size_t>(a)].push_back(s);
            eps[static_cast<std::size_t>(e)].push_back(s);
            eps[static_cast<std::size_t>(e)].push_back(b);
            if (r.kind == Regex::Kind::Star)
                eps[static_cast<std::size_t>(a)].push_back(b);
            return {a, b};
        }
        }
        return {0, 0};
    }

    explicit Nfa(const Regex &r) {
        auto [s, e] = build(r);
        start = s;
        accept = e;
        closure.resize(moves.size());
        for (std::size_t q = 0; q < moves.size(); ++q) {
            std::vector<char> seen(moves.size(), 0);
            std::vector<int> stack{static_cast<int>(q)};
            seen[q] = 1;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                closure[q].push_back(x);
                for (int y : eps[static_cast<std::size_t>(x)])
                    if (!seen[static_cast<std::size_t>(y)]) {
                        seen[static_cast<std::size_t>(y)] = 1;
                        stack.push_back(y);
                    }
            }
            std::sort(closure[q].begin(), closure[q].end());
        }
    }
};

} // namespace detail

std::vector<std::vector<std::string>> rpq_words(const RPQ &rpq, std::size_t max_length) {
    // Breadth-first over (word, state set) frontiers.
    const auto nfa = std::make_shared<const detail::Nfa>(rpq.regex);
    std::set<std::vector<std::string>> words;
    using States = std::vector<int>;
    auto close = [&](const States &in) {
        std::set<int> out;
        for (int s : in)
            for (int t : nfa->closure[static_cast<std::size_t>(s)])
                out.insert(t);
        return States(out.begin(), out.end());
    };
    std::vector<std::pair<std::vector<std::string>, States>> frontier{{{}, close({nfa->start})}};
    for (std::size_t len = 0;; ++len) {
        std::vector<std::pair<std::vector<std::string>, States>> next;
        for (const auto &[word, states] : frontier) {
            if (std::binary_search(states.begin(), states.end(), nfa->accept))
                words.insert(word);
            if (len == max_length)
                continue;
            std::map<std::string, std::vector<int>> by_symbol;
            for (int s : states)
                for (const auto &m : nfa->moves[static_cast<std::size_t>(s)])
                    by_symbol[m.symbol].push_back(m.to);
            for (auto &[sym, targets] : by_symbol) {
                auto w = word;
                w.push_back(sym);
                next.emplace_back(std::move(w), close(targets));
            }
        }
        if (next.empty() || len == max_length)
            break;
        frontier = std::move(next);
    }
    return {words.begin(), words.end()};
}

// ---------------------------------------------------------------------------
// Evaluation

Evaluator::Evaluator(const Query &query, const Instance &instance) : instance_(&instance), index_(instance) {
    if (query.is_ucq()) {
        for (const auto &d : query.ucq().disjuncts)
            patterns_.emplace_back(d, index_);
        return;
    }
    const auto &r = query.rpq();
    rpq_ = true;
    two_way_ = r.two_way;
    nfa_ = std::make_shared<const detail::Nfa>(r.regex);
    rel_moves_.resize(nfa_->moves.size());
    for (std::size_t s = 0; s < nfa_->moves.size(); ++s)
        for (const auto &m : nfa_->moves[s]) {
            int rel = index_.relation_id(m.symbol);
            if (rel >= 0)
                rel_moves_[s].emplace_back(rel, m.to);
        }
    if (r.start_tag) {
        start_tag_ = index_.relation_id(*r.start_tag);
        start_tag_missing_ = start_tag_ < 0;
    }
    if (r.end_tag) {
        end_tag_ = index_.relation_id(*r.end_tag);
        end_tag_missing_ = end_tag_ < 0;
    }
}

bool Evaluator::holds(ActiveFacts active) const {
    if (rpq_)
        return holds_rpq(active);
    for (const auto &p : patterns_)
        if (p.matches(active))
            return true;
    return false;
}

bool Evaluator::holds_rpq(ActiveFacts active) const {
    if (start_tag_missing_ || end_tag_missing_)
        return false;
    const detail::Nfa &nfa = *nfa_;
    const std::size_t states = nfa.moves.size();
    const std::size_t elements = index_.element_count();
    std::vector<char> present(elements, 0);
    for (std::size_t f = 0; f < index_.fact_count(); ++f) {
        if (!is_active(active, static_cast<int>(f)))
            continue;
        const auto &x = index_.fact(f);
        present[static_cast<std::size_t>(x.subject)] = 1;
        present[static_cast<std::size_t>(x.object)] = 1;
    }
    auto tagged = [&](int tag, int x) {
        if (tag < 0)
            return present[static_cast<std::size_t>(x)] != 0;
        int f = index_.lookup(tag, x, x);
        return f >= 0 && is_active(active, f);
    };
    std::vector<char> seen(elements * states, 0);
    std::deque<std::pair<int, int>> queue;
    auto push = [&](int x, int s) {
        for (int t : nfa.closure[static_cast<std::size_t>(s)]) {
            std::size_t key = static_cast<std::size_t>(x) * states + static_cast<std::size_t>(t);
            if (!seen[key]) {
                seen[key] = 1;
                queue.emplace_back(x, t);
            }
        }
    };
    for (int x = 0; x < static_cast<int>(elements); ++x)
        if (tagged(start_tag_, x))
            push(x, nfa.start);
    while (!queue.empty()) {
        auto [x, s] = queue.front();
        queue.pop_front();
        if (s == nfa.accept && tagged(end_tag_, x))
            return true;
        for (auto [rel, to] : rel_moves_[static_cast<std::size_t>(s)]) {
            for (const auto &arc : index_.out_arcs(rel, x))
                if (is_active(active, arc.fact))
                    push(arc.other, to);
            if (two_way_)
                for (const auto &arc : index_.in_arcs(rel, x))
                    if (is_active(active, arc.fact))
                        push(arc.other, to);
        }
    }
    return false;
}

bool evaluate(const Query &query, const Instance &instance) { return Evaluator(query, instance).holds_all(); }

std::vector<std::uint64_t> minimal_model_masks(const Query &query, const Instance &instance, std::size_t cap) {
    Subinstances subsets(instance, cap);
    Evaluator eval(query, instance);
    std::vector<std::uint64_t> minimal;
    const std::uint64_t total = subsets.count();
    for (std::uint64_t base = 0; base < total; base += 64) {
        const unsigned count = static_cast<unsigned>(std::min<std::uint64_t>(64, total - base));
        std::uint64_t covered = kernels::cover_block(base, count, minimal);
        for (unsigned k = 0; k < count; ++k) {
            if ((covered >> k) & 1U)
                continue;
            const std::uint64_t m = base + k;
            // masks found earlier in this block are not in `covered`
            bool skip = false;
            for (auto it = minimal.rbegin(); it != minimal.rend() && *it >= base; ++it)
                if ((m & *it) == *it) {
                    skip = true;
                    break;
                }
            if (!skip && eval.holds(m))
                minimal.push_back(m);
        }
    }
    return minimal;
}

std::vector<Instance> minimal_models_within(const Query &query, const Instance &instance, std::size_t cap) {
    std::vector<Instance> out;
    for (std::uint64_t m : minimal_model_masks(query, instance, cap))
        out.push_back(instance.subset(m));
    return out;
}

} // namespace urlab
