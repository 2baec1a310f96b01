#include "support.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "hdtk/zielonka.hpp"

namespace hdtk::testing {

std::string source_path(const std::string& rel) { return std::string(HDTK_SOURCE_DIR) + "/" + rel; }

ParityAutomaton fixture(const std::string& name) { return load_tpa(source_path("tests/fixtures/" + name + ".tpa")); }

// ---------------------------------------------------------------------------
// Parity games

namespace {

// Min priority on the cycle of the play where every vertex follows choice[v].
bool play_is_even(const ParityGame& g, const std::vector<std::vector<int>>& outs, const std::vector<int>& choice, int v) {
    const int n = g.num_vertices();
    std::vector<int> seen(n, -1);
    std::vector<int> prios;
    while (seen[v] < 0) {
        seen[v] = static_cast<int>(prios.size());
        int e = outs[v][choice[v]];
        prios.push_back(g.prio(e));
        v = g.dst[e];
    }
    int m = *std::min_element(prios.begin() + seen[v], prios.end());
    return m % 2 == 0;
}

// Calls f for every assignment of choices to the vertices of `who`.
void for_each_choice(const std::vector<int>& who, const std::vector<std::vector<int>>& outs, std::vector<int>& choice,
                     const std::function<bool()>& f) {
    for (int v : who) choice[v] = 0;
    while (true) {
        if (!f()) return;
        std::size_t i = 0;
        while (i < who.size() && choice[who[i]] + 1 == static_cast<int>(outs[who[i]].size())) choice[who[i++]] = 0;
        if (i == who.size()) return;
        ++choice[who[i]];
    }
}

}  // namespace

std::vector<char> brute_force_regions(const ParityGame& g) {
    const int n = g.num_vertices();
    auto outs = g.out_edges();
    std::vector<int> eve, adam;
    for (int v = 0; v < n; ++v) (g.owner[v] == Player::Eve ? eve : adam).push_back(v);
    std::vector<char> win(n, 0);
    std::vector<int> choice(n, 0);
    for_each_choice(eve, outs, choice, [&] {
        std::vector<char> beats(n, 1);
        for_each_choice(adam, outs, choice, [&] {
            for (int v = 0; v < n; ++v)
                if (beats[v] && !play_is_even(g, outs, choice, v)) beats[v] = 0;
            return true;
        });
        for (int v = 0; v < n; ++v) win[v] = win[v] || beats[v];
        return true;
    });
    return win;
}

std::vector<int> brute_force_ranks(const ParityGame& g) {
    const int n = g.num_vertices();
    auto outs = g.out_edges();
    std::vector<int> val(n, 0), next(n);
    for (int h = 1; h <= n * (n + 2); ++h) {
        for (int v = 0; v < n; ++v) {
            const bool eve = g.owner[v] == Player::Eve;
            int best = eve ? 1 << 30 : -1;
            for (int e : outs[v]) {
                int p = g.prio(e);
                int r = p == 0 ? 0 : p == 1 ? 1 + val[g.dst[e]] : val[g.dst[e]];
                best = eve ? std::min(best, r) : std::max(best, r);
            }
            next[v] = best;
        }
        std::swap(val, next);
    }
    return val;
}

ParityGame random_game(std::mt19937_64& rng, int n, int max_out, int max_prio) {
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    ParityGame g;
    for (int v = 0; v < n; ++v) g.add_vertex(uni(0, 1) ? Player::Adam : Player::Eve);
    for (int v = 0; v < n; ++v) {
        int d = uni(1, max_out);
        for (int j = 0; j < d; ++j) g.add_edge(v, uni(0, n - 1), uni(0, max_prio));
    }
    return g;
}

ParityGame restrict_to_eve_region(const ParityGame& g) {
    Solution s = solve_parity(g);
    std::vector<int> id(g.num_vertices(), -1);
    ParityGame h;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (s.eve_wins[v]) id[v] = h.add_vertex(g.owner[v]);
    for (int e = 0; e < g.num_edges(); ++e)
        if (id[g.src[e]] >= 0 && id[g.dst[e]] >= 0) h.add_edge(id[g.src[e]], id[g.dst[e]], g.prio(e));
    return h;
}

// ---------------------------------------------------------------------------
// Automata

DetPair hd_sample(std::uint64_t seed, int states, int lo, int hi, int letters) {
    RandomParams p;
    p.states = states;
    p.letters = letters;
    p.lo = lo;
    p.hi = hi;
    p.hd_by_construction = true;
    return {random_automaton(seed, p), random_deterministic(seed, p)};
}

ParityAutomaton union_of_deterministic(const ParityAutomaton& d1, const ParityAutomaton& d2) {
    if (d1.alphabet != d2.alphabet) throw Error("alphabet mismatch");
    MullerCondition cond = min_condition({d1.lo, d2.lo}, {d1.hi, d2.hi},
                                         [](const std::vector<int>& m) { return m[0] % 2 == 0 || m[1] % 2 == 0; });
    ZielonkaTree z = build_tree(cond);
    ParityAutomaton d;
    d.alphabet = d1.alphabet;
    std::map<std::array<int, 3>, int> id;
    std::deque<std::array<int, 3>> work;
    auto get = [&](int p, int q, int b) {
        auto [it, fresh] = id.try_emplace({p, q, b}, d.num_states());
        if (fresh) {
            d.states.push_back(d1.states[p] + "|" + d2.states[q] + "|" + std::to_string(b));
            work.push_back({p, q, b});
        }
        return it->second;
    };
    d.initial = get(d1.initial, d2.initial, 0);
    while (!work.empty()) {
        auto [p, q, b] = work.front();
        work.pop_front();
        const int from = id.at({p, q, b});
        for (int l = 0; l < d.num_letters(); ++l) {
            const Transition& t1 = d1.trans[d1.out(p, l)[0]];
            const Transition& t2 = d2.trans[d2.out(q, l)[0]];
            auto [prio, nb] = z.step(b, cond.encode({t1.prio, t2.prio}));
            d.trans.push_back({from, l, prio, get(t1.dst, t2.dst, nb)});
        }
    }
    d.finalize();
    return d;
}

DetPair union_sample(const DetPair& x, const DetPair& y) {
    ParityAutomaton a;
    a.alphabet = x.a.alphabet;
    a.states.push_back("s");
    const int ox = 1, oy = 1 + x.a.num_states();
    for (auto& s : x.a.states) a.states.push_back("l_" + s);
    for (auto& s : y.a.states) a.states.push_back("r_" + s);
    a.initial = 0;
    for (const Transition& t : x.a.trans) {
        if (t.src == x.a.initial) a.trans.push_back({0, t.letter, t.prio, t.dst + ox});
        a.trans.push_back({t.src + ox, t.letter, t.prio, t.dst + ox});
    }
    for (const Transition& t : y.a.trans) {
        if (t.src == y.a.initial) a.trans.push_back({0, t.letter, t.prio, t.dst + oy});
        a.trans.push_back({t.src + oy, t.letter, t.prio, t.dst + oy});
    }
    a.finalize();
    return {a, union_of_deterministic(x.d, y.d)};
}

bool lasso_equivalent(const ParityAutomaton& a, const ParityAutomaton& b, int max_prefix, int max_cycle,
                      LassoWord* mismatch) {
    bool same = true;
    for_each_lasso(a.num_letters(), max_prefix, max_cycle, [&](const LassoWord& w) {
        if (!same) return;
        if (lasso_member(a, w) != lasso_member(b, w)) {
            same = false;
            if (mismatch) *mismatch = w;
        }
    });
    return same;
}

ParityAutomaton perturbed_fixture(const std::string& name, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ParityAutomaton a = fixture(name);
    const int extra = static_cast<int>(rng() % 3);
    for (int i = 0; i < extra; ++i) {
        const int src = static_cast<int>(rng() % a.num_states()), letter = static_cast<int>(rng() % a.num_letters());
        const int prio = a.lo + static_cast<int>(rng() % (a.hi - a.lo + 1)), dst = static_cast<int>(rng() % a.num_states());
        a.trans.push_back({src, letter, prio, dst});
    }
    if (rng() % 2 && a.num_trans() > 3) a.trans.erase(a.trans.begin() + static_cast<long>(rng() % a.num_trans()));
    a.finalize();
    return a;
}

ParityAutomaton random_nd(std::uint64_t seed, int states, int lo, int hi, int letters, double density) {
    RandomParams p;
    p.states = states;
    p.letters = letters;
    p.lo = lo;
    p.hi = hi;
    p.density = density;
    return random_automaton(seed, p);
}

// ---------------------------------------------------------------------------
// SAT and implication games

bool brute_force_sat(const CnfFormula& f) {
    for (int m = 0; m < (1 << f.vars); ++m) {
        bool all = true;
        for (auto& t : f.terms) {
            bool some = false;
            for (int l : t) some = some || (((m >> (std::abs(l) - 1)) & 1) == (l > 0 ? 1 : 0));
            all = all && some;
        }
        if (all) return true;
    }
    return false;
}

namespace {

// Terms as base-3 codes: digit j is 0 (absent), 1 (x_j) or 2 (not x_j).
int transform_term(int code, int vars, const std::vector<int>& perm, int flips) {
    int out = 0;
    for (int j = 0, c = code; j < vars; ++j, c /= 3) {
        int d = c % 3;
        if (d && ((flips >> j) & 1)) d = 3 - d;
        int pw = 1;
        for (int k = 0; k < perm[j]; ++k) pw *= 3;
        out += d * pw;
    }
    return out;
}

std::vector<int> term_literals(int code, int vars) {
    std::vector<int> t;
    for (int j = 0; j < vars; ++j, code /= 3)
        if (code % 3) t.push_back(code % 3 == 1 ? j + 1 : -(j + 1));
    return t;
}

}  // namespace

std::vector<CnfFormula> enumerate_cnfs(int vars, int max_terms, bool orbits) {
    int codes = 1;
    for (int j = 0; j < vars; ++j) codes *= 3;
    std::vector<int> terms;
    for (int c = 1; c < codes; ++c) terms.push_back(c);
    std::vector<std::vector<int>> perms;
    std::vector<int> perm(vars);
    std::iota(perm.begin(), perm.end(), 0);
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<CnfFormula> out;
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int from) {
        if (!pick.empty()) {
            std::vector<int> key;
            for (int i : pick) key.push_back(terms[i]);
            bool canonical = true;
            if (orbits)
                for (auto& p : perms) {
                    for (int flips = 0; flips < (1 << vars) && canonical; ++flips) {
                        std::vector<int> img;
                        for (int c : key) img.push_back(transform_term(c, vars, p, flips));
                        std::sort(img.begin(), img.end());
                        canonical = !(img < key);
                    }
                    if (!canonical) break;
                }
            if (canonical) {
                CnfFormula f;
                f.vars = vars;
                for (int c : key) f.terms.push_back(term_literals(c, vars));
                out.push_back(std::move(f));
            }
        }
        if (static_cast<int>(pick.size()) == max_terms) return;
        for (int i = from; i < static_cast<int>(terms.size()); ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

CnfFormula random_cnf(std::mt19937_64& rng, int vars, int terms) {
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    CnfFormula f;
    f.vars = vars;
    for (int i = 0; i < terms; ++i) {
        std::vector<int> t;
        while (t.empty())
            for (int j = 1; j <= vars; ++j)
                if (uni(0, 2) == 0) t.push_back(uni(0, 1) ? j : -j);
        f.terms.push_back(std::move(t));
    }
    return f;
}

bool brute_force_implication(const Arena& g) {
    auto outs = g.out_edges();
    std::vector<int> eve;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (g.owner[v] == Player::Eve) eve.push_back(v);
    std::vector<int> choice(g.num_vertices(), 0);
    bool wins = false;
    for_each_choice(eve, outs, choice, [&] {
        std::vector<char> mask(g.num_edges(), 1);
        for (int v : eve)
            for (std::size_t i = 0; i < outs[v].size(); ++i) mask[outs[v][i]] = static_cast<int>(i) == choice[v];
        wins = !exists_cycle_with_minima(g, mask, 0, 1);
        return !wins;
    });
    return wins;
}

Arena random_implication_arena(std::mt19937_64& rng, int n, int max_prio) {
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Arena g;
    g.dim = 2;
    for (int v = 0; v < n; ++v) g.add_vertex(uni(0, 1) ? Player::Adam : Player::Eve);
    for (int v = 0; v < n; ++v) {
        int d = uni(1, 2);
        for (int j = 0; j < d; ++j) g.add_edge(v, uni(0, n - 1), {uni(0, max_prio), uni(0, max_prio)});
    }
    return g;
}

}  // namespace hdtk::testing
