#include "corpus.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "hdtk/buchi_det.hpp"
#include "hdtk/hd.hpp"
#include "hdtk/normal_forms.hpp"
#include "hdtk/reductions.hpp"
#include "hdtk/token_games.hpp"
#include "hdtk/zielonka.hpp"

namespace hdtk::cli {

namespace {

class Ctx {
public:
    Ctx(const CorpusLine& line, const std::string& base, std::uint64_t seed) : line_(line), base_(base), seed_(seed) {}

    int num(const std::string& key, int def) {
        auto it = line_.params.find(key);
        if (it == line_.params.end()) return def;
        try {
            std::size_t pos = 0;
            int v = std::stoi(it->second, &pos);
            if (pos == it->second.size()) return v;
        } catch (const std::exception&) {
        }
        throw Error("corpus line " + std::to_string(line_.line) + ": " + key + " must be an integer");
    }
    std::string path(const std::string& key, const std::string& def) {
        auto it = line_.params.find(key);
        std::filesystem::path p = it == line_.params.end() ? def : it->second;
        return p.is_absolute() ? p.string() : (std::filesystem::path(base_) / p).string();
    }
    std::uint64_t seed() {
        return static_cast<std::uint64_t>(num("seed", 0)) + seed_;
    }

    void expect(bool ok, const std::string& what) {
        ++result.checks;
        if (ok) return;
        if (!result.failures) result.first_failure = what;
        ++result.failures;
    }

    PropertyResult result;

private:
    const CorpusLine& line_;
    std::string base_;
    std::uint64_t seed_;
};

RandomParams params(int states, int lo, int hi, bool hd) {
    RandomParams p;
    p.states = states;
    p.lo = lo;
    p.hi = hi;
    p.hd_by_construction = hd;
    return p;
}

bool lassos_agree(const ParityAutomaton& a, const ParityAutomaton& b, int len) {
    bool same = true;
    for_each_lasso(a.num_letters(), len, len, [&](const LassoWord& w) {
        if (same && lasso_member(a, w) != lasso_member(b, w)) same = false;
    });
    return same;
}

void fixtures(Ctx& c) {
    const std::string dir = c.path("dir", "tests/fixtures");
    ParityAutomaton a = load_tpa(dir + "/fix_a.tpa"), b = load_tpa(dir + "/fix_b.tpa"), x = load_tpa(dir + "/fix_c.tpa");
    c.expect(eve_wins_gk(a, 1), "fix_a: Eve wins G1");
    c.expect(!eve_wins_gk(a, 2), "fix_a: Adam wins G2");
    c.expect(!eve_wins_joker(a), "fix_a: Adam wins Joker");
    c.expect(!check_hd(a).hd, "fix_a: notHD");
    c.expect(check_hd(b).hd, "fix_b: HD");
    c.expect(eve_wins_joker(b), "fix_b: Eve wins Joker");
    c.expect(eve_wins_joker(x), "fix_c: Eve wins Joker");
    c.expect(!eve_wins_gk(x, 2), "fix_c: Adam wins G2");
}

void hd_oracle(Ctx& c) {
    const int count = c.num("count", 50), states = c.num("states", 6), hi = c.num("hi", 3);
    const std::uint64_t seed = c.seed();
    for (int i = 0; i < count; ++i) {
        const int lo = i % 2;
        RandomParams p = params(2 + i % std::max(1, states - 1), lo, std::min(hi, lo + 1 + i % 3), true);
        ParityAutomaton a = random_automaton(seed + i, p), d = random_deterministic(seed + i, p);
        const bool v = check_hd(a).hd;
        c.expect(v == hd_oracle_vs_det(a, d, seed + i), "sample " + std::to_string(i) + ": check_hd differs from oracle");
        c.expect(v, "sample " + std::to_string(i) + ": HD by construction but notHD");
    }
}

void determinize(Ctx& c) {
    const int count = c.num("count", 30), states = c.num("states", 8), len = c.num("lasso", 4);
    const std::uint64_t seed = c.seed();
    for (int i = 0; i < count; ++i) {
        ParityAutomaton a = random_automaton(seed + i, params(2 + i % std::max(1, states - 1), 0, 1, true));
        ParityAutomaton d = determinize_hd_buchi(a);
        const int n = a.num_states();
        const std::string tag = "sample " + std::to_string(i);
        c.expect(d.is_deterministic(), tag + ": output not deterministic");
        c.expect(d.num_states() <= n * n, tag + ": more than n^2 states");
        c.expect(lassos_agree(a, d, len), tag + ": lasso mismatch");
    }
}

void zielonka(Ctx& c) {
    const int max_d = c.num("max-d", 3), max_implication = c.num("max-implication", 6);
    for (int d = 0; d <= max_d; ++d) {
        TwoTokenCondition r = build_2token_condition(d);
        const int cube = (d + 1) * (d + 1) * (d + 1);
        const std::string tag = "two-token d=" + std::to_string(d);
        c.expect(r.tree.dump(r.cond) == build_tree(r.cond).dump(r.cond), tag + ": rules differ from generic builder");
        c.expect(r.tree.distinct_labels() <= cube, tag + ": label bound");
        c.expect(r.tree.height() <= 3 * (d + 1), tag + ": height bound");
        c.expect(r.tree.num_branches() <= (1 << (3 * (d + 1))), tag + ": branch bound");
        c.expect(check_tree_invariants(r.tree, r.cond).empty(), tag + ": tree invariants");
    }
    for (int i = 0; i <= 1; ++i)
        for (int d = 1; d <= max_implication; ++d) {
            auto [cond, y] = build_implication_condition(1, d, i);
            const std::string tag = "implication i=" + std::to_string(i) + " d=" + std::to_string(d);
            c.expect(y.num_branches() == (i == 1 ? 1 + (d + 1) / 2 : 1 + d / 2), tag + ": leaves");
            c.expect(y.height() == ((i + d) % 2 == 0 ? d : d + 1), tag + ": height");
            c.expect(check_tree_invariants(y, cond).empty(), tag + ": tree invariants");
        }
}

void token_games(Ctx& c) {
    const int count = c.num("count", 30), states = c.num("states", 3);
    const std::uint64_t seed = c.seed();
    for (int i = 0; i < count; ++i) {
        RandomParams p = params(2 + i % std::max(1, states - 1), 0, 1 + i % 2, false);
        p.density = 0.2 + 0.1 * (i % 4);
        ParityAutomaton a = random_automaton(seed + i, p);
        const std::string tag = "sample " + std::to_string(i);
        const bool g1 = eve_wins_gk(a, 1), g2 = eve_wins_gk(a, 2), joker = eve_wins_joker(a);
        c.expect(g2 == eve_wins_gk(a, 3), tag + ": G2 and G3 differ");
        c.expect(!g2 || joker, tag + ": G2 without Joker");
        c.expect(!joker || g1, tag + ": Joker without G1");
        c.expect(eve_wins_lookahead(a, 1) == g1, tag + ": 1-lookahead differs from G1");
        c.expect(eve_wins_lookahead(a, 2) == g1, tag + ": 2-lookahead differs from G1");
        c.expect(check_hd(a).hd == g2, tag + ": check_hd differs from G2");
    }
}

void extraction(Ctx& c) {
    const int count = c.num("count", 20), states = c.num("states", 5);
    const std::uint64_t seed = c.seed();
    for (int i = 0; i < count; ++i) {
        const int lo = i % 2;
        ParityAutomaton a = random_automaton(seed + i, params(2 + i % std::max(1, states - 1), lo, lo + 1 + i % 2, true));
        ParityAutomaton b = extract_subautomaton(a, ExtractMode::TheoremI);
        const std::string tag = "sample " + std::to_string(i);
        c.expect(eve_wins_sim(a, b) && eve_wins_sim(b, a), tag + ": not simulation-equivalent");
        c.expect(wins_everywhere(b, 2).all, tag + ": G2 not won everywhere");
        c.expect(wins_everywhere(extract_subautomaton(a, ExtractMode::Joker), 1).all,
                 tag + ": joker extraction, G1 not won everywhere");
    }
}

void normalize(Ctx& c) {
    const int count = c.num("count", 10), states = c.num("states", 4);
    const std::uint64_t seed = c.seed();
    int found = 0;
    for (int i = 0; found < count && i < 50 * count; ++i) {
        ParityAutomaton a = extract_subautomaton(
            random_automaton(seed + i, params(2 + i % std::max(1, states - 1), 0, 2, true)), ExtractMode::TheoremI);
        if (!wins_everywhere(a, 2).all) continue;
        ++found;
        ParityAutomaton b = normalize_even(a);
        NormalFormReport r = check_normal_form(a, b, seed + i);
        c.expect(r.ok(), "sample " + std::to_string(i) + ": normal form conditions fail");
    }
    c.expect(found == count, "not enough 2-token-everywhere inputs");
}

CnfFormula random_formula(std::mt19937_64& rng, int vars, int terms) {
    CnfFormula f;
    f.vars = vars;
    for (int t = 0; t < terms; ++t) {
        std::vector<int> term;
        while (term.empty())
            for (int v = 1; v <= vars; ++v) {
                const int pick = static_cast<int>(rng() % 3);
                if (pick) term.push_back(pick == 1 ? v : -v);
            }
        f.terms.push_back(term);
    }
    return f;
}

bool satisfiable(const CnfFormula& f) {
    for (unsigned m = 0; m < (1u << f.vars); ++m) {
        bool all = true;
        for (auto& t : f.terms) {
            bool any = false;
            for (int l : t) any = any || ((m >> (std::abs(l) - 1) & 1) != 0) == (l > 0);
            all = all && any;
        }
        if (all) return true;
    }
    return false;
}

void chain(Ctx& c) {
    const int count = c.num("count", 20), vars = c.num("vars", 3), terms = c.num("terms", 3);
    std::mt19937_64 rng(c.seed());
    for (int i = 0; i < count; ++i) {
        CnfFormula f = random_formula(rng, 1 + i % vars, 1 + i % terms);
        const bool want = satisfiable(f);
        ChainReport r = crosscheck_chain(sat_to_good_implication(f));
        for (std::size_t k = 0; k < r.verdict.size(); ++k)
            c.expect(r.verdict[k] == want, "formula " + std::to_string(i) + ": " + ChainReport::kNames[k] +
                                               " differs from brute-force SAT");
    }
}

void solver(Ctx& c) {
    const int count = c.num("count", 2000), vertices = c.num("vertices", 6), prio = c.num("prio", 4);
    std::mt19937_64 rng(c.seed());
    for (int i = 0; i < count; ++i) {
        ParityGame g;
        const int n = 1 + i % vertices;
        for (int v = 0; v < n; ++v) g.add_vertex(rng() % 2 ? Player::Eve : Player::Adam);
        for (int v = 0; v < n; ++v) {
            const int out = 1 + static_cast<int>(rng() % 2);
            for (int e = 0; e < out; ++e)
                g.add_edge(v, static_cast<int>(rng() % n), static_cast<int>(rng() % (prio + 1)));
        }
        Solution s = solve_parity(g);
        for (Player p : {Player::Eve, Player::Adam})
            c.expect(verify_strategy(g, s.strategy, p, s.region(p)),
                     "game " + std::to_string(i) + ": " + player_name(p) + " strategy rejected");
    }
}

void inclusion(Ctx& c) {
    const int count = c.num("count", 50), states = c.num("states", 4);
    const std::uint64_t seed = c.seed();
    for (int i = 0; i < count; ++i) {
        RandomParams p = params(2 + i % std::max(1, states - 1), 0, 1 + i % 3, false);
        ParityAutomaton d = random_deterministic(seed + i, p);
        p.hd_by_construction = i % 2 == 0;
        ParityAutomaton a = i % 3 == 0 ? random_deterministic(seed + i + 7, p) : random_automaton(seed + 1000 + i, p);
        c.expect(inclusion_hd(a, d) == inclusion_oracle_det(a, d), "pair " + std::to_string(i));
    }
}

struct Property {
    std::function<void(Ctx&)> run;
    std::vector<std::string> keys;
};

const std::map<std::string, Property>& table() {
    static const std::map<std::string, Property> t{
        {"fixtures", {fixtures, {"dir"}}},
        {"hd-oracle", {hd_oracle, {"count", "states", "hi", "seed"}}},
        {"determinize", {determinize, {"count", "states", "lasso", "seed"}}},
        {"zielonka", {zielonka, {"max-d", "max-implication"}}},
        {"token-games", {token_games, {"count", "states", "seed"}}},
        {"extraction", {extraction, {"count", "states", "seed"}}},
        {"normalize", {normalize, {"count", "states", "seed"}}},
        {"chain", {chain, {"count", "vars", "terms", "seed"}}},
        {"solver", {solver, {"count", "vertices", "prio", "seed"}}},
        {"inclusion", {inclusion, {"count", "states", "seed"}}},
    };
    return t;
}

}  // namespace

std::vector<std::string> corpus_properties() {
    std::vector<std::string> out;
    for (auto& [k, v] : table()) out.push_back(k);
    return out;
}

CorpusSpec parse_corpus(const std::string& text, const std::string& base_dir) {
    CorpusSpec spec;
    spec.base_dir = base_dir;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string s = raw.substr(0, raw.find('#'));
        std::istringstream ls(s);
        CorpusLine line;
        line.line = lineno;
        if (!(ls >> line.property)) continue;
        if (!table().count(line.property))
            throw Error("corpus line " + std::to_string(lineno) + ": unknown property '" + line.property + "'");
        std::string kv;
        while (ls >> kv) {
            auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw Error("corpus line " + std::to_string(lineno) + ": expected key=value, got '" + kv + "'");
            const std::string key = kv.substr(0, eq);
            const auto& keys = table().at(line.property).keys;
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw Error("corpus line " + std::to_string(lineno) + ": unknown parameter '" + key + "' for " +
                            line.property);
            line.params[key] = kv.substr(eq + 1);
        }
        spec.lines.push_back(line);
    }
    return spec;
}

std::vector<PropertyResult> run_corpus(const CorpusSpec& spec, std::uint64_t seed, int threads) {
    for (const CorpusLine& line : spec.lines) {
        Ctx probe(line, spec.base_dir, seed);
        for (auto& [k, v] : line.params)
            if (k != "dir") probe.num(k, 0);
    }
    std::vector<PropertyResult> results(spec.lines.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < spec.lines.size();) {
            const CorpusLine& line = spec.lines[i];
            Ctx c(line, spec.base_dir, seed);
            c.result.property = line.property;
            c.result.line = line.line;
            try {
                table().at(line.property).run(c);
            } catch (const std::exception& e) {
                c.expect(false, e.what());
            }
            results[i] = c.result;
        }
    };
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(spec.lines.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace hdtk::cli
