#include "urlab/reliability.hpp"

#include "urlab/error.hpp"
#include "urlab/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <thread>

namespace urlab {

TID::TID(Instance inst, std::vector<Probability> probs) : instance(std::move(inst)), pi(std::move(probs)) {
    if (pi.size() != instance.size())
        throw PreconditionError("TID needs one probability per fact (" + std::to_string(instance.size()) +
                                " facts, " + std::to_string(pi.size()) + " probabilities)");
}

TID TID::uniform(Instance inst, const Probability &p) {
    std::vector<Probability> probs(inst.size(), p);
    return TID(std::move(inst), std::move(probs));
}

const Probability &TID::prob(const Fact &fact) const {
    std::size_t i = instance.index_of(fact);
    if (i == instance.size())
        throw PreconditionError("fact " + to_string(fact) + " is not in the TID");
    return pi[i];
}

TID parse_tid(std::string_view text, std::optional<Probability> fallback) {
    std::map<Fact, Probability> table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        ++line_no;
        std::string_view line = text.substr(pos, end - pos);
        if (auto c = line.find("//"); c != std::string_view::npos)
            line = line.substr(0, c);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.remove_suffix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
            line.remove_prefix(1);
        if (!line.empty() && line.front() != '%') {
            auto close = line.find(')');
            if (close == std::string_view::npos)
                throw ParseError("expected R(a,b) followed by a probability", line_no);
            Fact f = parse_fact(line.substr(0, close + 1), line_no);
            std::string_view rest = line.substr(close + 1);
            while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front())))
                rest.remove_prefix(1);
            Probability p;
            if (rest.empty()) {
                if (!fallback)
                    throw ParseError("missing probability for " + to_string(f), line_no);
                p = *fallback;
            } else {
                try {
                    p = Probability::parse(rest);
                } catch (const ParseError &e) {
                    throw ParseError("bad probability '" + std::string(rest) + "'", line_no, close + 2);
                } catch (const PreconditionError &e) {
                    throw ParseError(e.what(), line_no, close + 2);
                }
            }
            auto [it, inserted] = table.emplace(f, p);
            if (!inserted && it->second != p)
                throw ParseError("conflicting probabilities for " + to_string(f), line_no);
        }
        if (end == text.size())
            break;
        pos = end + 1;
    }
    std::vector<Fact> facts;
    std::vector<Probability> probs;
    for (auto &[f, p] : table) {
        facts.push_back(f);
        probs.push_back(p);
    }
    return TID(Instance(std::move(facts)), std::move(probs));
}

std::string serialize_tid(const TID &tid) {
    std::string out;
    for (std::size_t i = 0; i < tid.instance.size(); ++i)
        out += to_string(tid.instance[i]) + " " + tid.pi[i].str() + "\n";
    return out;
}

nlohmann::json tid_to_json(const TID &tid) {
    nlohmann::json facts = nlohmann::json::array();
    for (std::size_t i = 0; i < tid.instance.size(); ++i) {
        const auto &f = tid.instance[i];
        facts.push_back({f.relation, f.subject, f.object, tid.pi[i].str()});
    }
    return {{"facts", facts}};
}

TID tid_from_json(const nlohmann::json &json) {
    if (!json.is_object() || !json.contains("facts") || !json["facts"].is_array())
        throw ParseError("TID JSON must be an object with a \"facts\" array", 1);
    std::vector<Fact> facts;
    std::map<Fact, Probability> table;
    for (const auto &row : json["facts"]) {
        if (!row.is_array() || row.size() != 4)
            throw ParseError("TID fact must be [R, a, b, \"num/den\"]", 1);
        Fact f{row[0].get<std::string>(), row[1].get<std::string>(), row[2].get<std::string>()};
        auto p = row[3].is_string() ? Probability::parse(row[3].get<std::string>())
                                    : Probability(Rational(row[3].get<double>()));
        table.emplace(f, p);
    }
    std::vector<Probability> probs;
    for (auto &[f, p] : table) {
        facts.push_back(f);
        probs.push_back(p);
    }
    return TID(Instance(std::move(facts)), std::move(probs));
}

// ---------------------------------------------------------------------------

std::uint64_t SatisfactionMap::count() const {
    std::uint64_t total = 0;
    for (std::uint64_t w : bits_)
        total += static_cast<std::uint64_t>(std::popcount(w));
    return total;
}

namespace {

// Fills bits for masks in [lo, hi); lo and hi are multiples of 64 unless hi
// is the total.
void fill_range(const Query &query, const Instance &instance, std::uint64_t lo, std::uint64_t hi,
                std::vector<std::uint64_t> &bits) {
    Evaluator eval(query, instance);
    std::vector<std::uint64_t> found;
    for (std::uint64_t base = lo; base < hi; base += 64) {
        const unsigned count = static_cast<unsigned>(std::min<std::uint64_t>(64, hi - base));
        std::uint64_t word = kernels::cover_block(base, count, found);
        for (unsigned k = 0; k < count; ++k) {
            if ((word >> k) & 1U)
                continue;
            const std::uint64_t m = base + k;
            bool covered = false;
            for (auto it = found.rbegin(); it != found.rend() && *it >= base; ++it)
                if ((m & *it) == *it) {
                    covered = true;
                    break;
                }
            if (covered || eval.holds(m)) {
                word |= std::uint64_t{1} << k;
                if (!covered)
                    found.push_back(m);
            }
        }
        bits[base >> 6] = word;
    }
}

} // namespace

SatisfactionMap satisfaction_map(const Query &query, const Instance &instance, std::size_t workers,
                                 std::size_t cap) {
    Subinstances subsets(instance, cap);
    const std::uint64_t total = subsets.count();
    std::vector<std::uint64_t> bits((total + 63) / 64, 0);
    const std::uint64_t blocks = bits.size();
    workers = std::max<std::size_t>(1, std::min<std::size_t>(workers, blocks));
    if (workers == 1) {
        fill_range(query, instance, 0, total, bits);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t per = (blocks + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            std::uint64_t lo = std::min(blocks, w * per) * 64;
            std::uint64_t hi = std::min(total, std::min(blocks, (w + 1) * per) * 64);
            if (lo >= hi)
                continue;
            pool.emplace_back([&, lo, hi] { fill_range(query, instance, lo, hi, bits); });
        }
        for (auto &t : pool)
            t.join();
    }
    return SatisfactionMap(instance.size(), std::move(bits));
}

BigInt ur_count(const Query &query, const Instance &instance, std::size_t workers, std::size_t cap) {
    return BigInt(static_cast<unsigned long>(satisfaction_map(query, instance, workers, cap).count()));
}

namespace {

// Weight table over `bits` consecutive facts starting at `offset`:
// W[m] = prod over set bits of n_i, over clear bits of d_i - n_i.
std::vector<BigInt> weight_table(const TID &tid, std::size_t offset, std::size_t bits) {
    std::vector<BigInt> table(std::size_t{1} << bits);
    table[0] = 1;
    for (std::size_t i = 0; i < bits; ++i) {
        const Rational &p = tid.pi[offset + i].value();
        const BigInt present = p.get_num();
        const BigInt absent = p.get_den() - p.get_num();
        const std::size_t half = std::size_t{1} << i;
        for (std::size_t m = 0; m < half; ++m) {
            table[m | half] = table[m] * present;
            table[m] *= absent;
        }
    }
    return table;
}

} // namespace

Probability pqe(const SatisfactionMap &map, const TID &tid) {
    const std::size_t n = tid.instance.size();
    if (map.facts() != n)
        throw PreconditionError("satisfaction map and TID differ in size");
    const std::size_t low = n / 2;
    const std::size_t high = n - low;
    auto wl = weight_table(tid, 0, low);
    auto wh = weight_table(tid, low, high);
    BigInt numerator = 0;
    BigInt partial;
    for (std::uint64_t h = 0; h < (std::uint64_t{1} << high); ++h) {
        partial = 0;
        for (std::uint64_t l = 0; l < (std::uint64_t{1} << low); ++l)
            if (map.satisfied((h << low) | l))
                partial += wl[l];
        if (partial != 0)
            numerator += partial * wh[h];
    }
    BigInt denominator = 1;
    for (const auto &p : tid.pi)
        denominator *= p.value().get_den();
    Rational out(numerator, denominator);
    out.canonicalize();
    return Probability(out);
}

Probability pqe(const Query &query, const TID &tid, std::size_t workers, std::size_t cap) {
    return pqe(satisfaction_map(query, tid.instance, workers, cap), tid);
}

Probability pqe_direct(const Query &query, const TID &tid, std::size_t cap) {
    Subinstances subsets(tid.instance, cap);
    Evaluator eval(query, tid.instance);
    Rational total = 0;
    for (std::uint64_t m = 0; m < subsets.count(); ++m) {
        if (!eval.holds(m))
            continue;
        Rational w = 1;
        for (std::size_t i = 0; i < tid.instance.size(); ++i)
            w *= ((m >> i) & 1U) ? tid.pi[i].value() : Rational(1 - tid.pi[i].value());
        total += w;
    }
    total.canonicalize();
    return Probability(total);
}

// ---------------------------------------------------------------------------

McEstimate mc_estimate(const Query &query, const TID &tid, std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0)
        throw PreconditionError("mc_estimate needs at least one sample");
    const std::size_t n = tid.instance.size();
    const std::size_t words = (n + 63) / 64;
    Evaluator eval(query, tid.instance);

    std::vector<std::uint64_t> certain(std::max<std::size_t>(words, 1), 0);
    std::vector<std::uint64_t> possible(std::max<std::size_t>(words, 1), 0);
    // present iff a uniform 64-bit draw is below floor(p * 2^64)
    std::vector<std::uint64_t> threshold(n, 0);
    const BigInt two64 = pow(BigInt(2), 64);
    for (std::size_t i = 0; i < n; ++i) {
        const Rational &p = tid.pi[i].value();
        if (p == 1)
            certain[i >> 6] |= std::uint64_t{1} << (i & 63);
        if (p > 0)
            possible[i >> 6] |= std::uint64_t{1} << (i & 63);
        if (p > 0 && p < 1) {
            BigInt t = (p.get_num() * two64) / p.get_den();
            threshold[i] = static_cast<std::uint64_t>(t.get_ui());
        }
    }
    McEstimate out;
    out.samples = samples;
    if (eval.holds(ActiveFacts(certain))) {
        out.estimate = 1;
        out.hits = samples;
        return out;
    }
    if (!eval.holds(ActiveFacts(possible)))
        return out;

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> world(certain.size());
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::fill(world.begin(), world.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const Rational &p = tid.pi[i].value();
            bool present;
            if (p == 1)
                present = true;
            else if (p == 0)
                present = false;
            else
                present = rng() < threshold[i];
            if (present)
                world[i >> 6] |= std::uint64_t{1} << (i & 63);
        }
        if (eval.holds(ActiveFacts(world)))
            ++out.hits;
    }
    const double nn = static_cast<double>(samples);
    const double ph = static_cast<double>(out.hits) / nn;
    const double z = 1.959963984540054;
    out.estimate = ph;
    out.half_width = z / (1 + z * z / nn) * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn));
    return out;
}

} // namespace urlab
