#include "hdtk/token_games.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <tuple>

namespace hdtk {

int TokenGame::round_vertex(const std::vector<int>& tuple) const {
    auto it = rounds.find(tuple);
    return it == rounds.end() ? -1 : it->second;
}

namespace {

ParityAutomaton completed(const ParityAutomaton& a) {
    return validate_and_complete(a, CompleteMode::AddRejectingSink);
}

// Shared vertex bookkeeping for the token arenas.
class ArenaBuilder {
public:
    explicit ArenaBuilder(TokenGame& g) : g_(g) {}

    int get(std::vector<int> key, const TokenVertex& info, Player owner, const std::string& name) {
        auto [it, fresh] = ids_.try_emplace(std::move(key), -1);
        if (!fresh) return it->second;
        it->second = g_.arena.add_vertex(owner, name);
        g_.info.push_back(info);
        work_.push_back(it->second);
        return it->second;
    }
    bool pop(int& v) {
        if (work_.empty()) return false;
        v = work_.front();
        work_.pop_front();
        return true;
    }

private:
    TokenGame& g_;
    std::map<std::vector<int>, int> ids_;
    std::deque<int> work_;
};

std::string tuple_name(const TokenGame& g, int q, const std::array<int, 3>& p, int k) {
    std::string s = g.eve.states[q] + "|";
    for (int i = 0; i < k; ++i) s += (i ? "," : "") + g.adam[i].states[p[i]];
    return s;
}

std::vector<int> neutral_colour(const MullerCondition& c) { return c.hi; }

int add_round(TokenGame& g, ArenaBuilder& b, int q, const std::array<int, 3>& p) {
    TokenVertex info;
    info.kind = TokenVertex::Round;
    info.q = q;
    info.p = p;
    std::vector<int> key{0, q};
    std::vector<int> tuple{q};
    for (int i = 0; i < g.k; ++i) {
        key.push_back(p[i]);
        tuple.push_back(p[i]);
    }
    int v = b.get(key, info, Player::Adam, "R[" + tuple_name(g, q, p, g.k) + "]");
    g.rounds.emplace(tuple, v);
    return v;
}

// Moves into empty-language states are dominated by any other move; one is kept if all are.
std::vector<int> useful(const ParityAutomaton& a, const std::vector<char>& live, std::span<const int> ts) {
    std::vector<int> out;
    for (int t : ts)
        if (live[a.trans[t].dst]) out.push_back(t);
    if (out.empty() && !ts.empty()) out.push_back(ts[0]);
    return out;
}

// Trees depend only on the condition, which is fixed by the game kind and the ranges.
ZielonkaTree cached_tree(const TokenGame& g) {
    static std::mutex mu;
    static std::map<std::tuple<bool, std::vector<int>, std::vector<int>>, ZielonkaTree> cache;
    auto key = std::make_tuple(g.kind == TokenKind::Gk, g.cond.lo, g.cond.hi);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_tree(g.cond)).first;
    return it->second;
}

void finish(TokenGame& g) {
    g.arena.check();
    g.tree = cached_tree(g);
}

}  // namespace

TokenGame build_gk(const ParityAutomaton& eve_in, const std::vector<ParityAutomaton>& adam_in,
                   const std::vector<std::vector<int>>& starts, int cap) {
    const int k = static_cast<int>(adam_in.size());
    if (k < 1) throw Error("token game needs at least one Adam token");
    if (k > cap) throw Error("token count " + std::to_string(k) + " exceeds the cap " + std::to_string(cap));
    if (k > 3) throw Error("at most three Adam tokens are supported");
    TokenGame g;
    g.kind = TokenKind::Gk;
    g.k = k;
    g.eve = completed(eve_in);
    for (auto& b : adam_in) {
        if (b.alphabet != eve_in.alphabet) throw Error("alphabet mismatch");
        g.adam.push_back(completed(b));
    }
    std::vector<int> lo{g.eve.lo}, hi{g.eve.hi};
    for (auto& b : g.adam) {
        lo.push_back(b.lo);
        hi.push_back(b.hi);
    }
    g.cond = token_condition(lo, hi);
    g.arena.dim = k + 1;
    const std::vector<int> pad = neutral_colour(g.cond);
    ArenaBuilder b(g);
    for (auto& s : starts) {
        if (static_cast<int>(s.size()) != k + 1) throw Error("start tuple has wrong length");
        std::array<int, 3> p{};
        for (int i = 0; i < k; ++i) p[i] = s[i + 1];
        g.roots.push_back(add_round(g, b, s[0], p));
    }
    const int m = g.eve.num_letters();
    const std::vector<char> eve_live = nonempty_states(g.eve);
    std::vector<std::vector<char>> live;
    for (auto& a : g.adam) live.push_back(nonempty_states(a));
    for (int v; b.pop(v);) {
        const TokenVertex cur = g.info[v];
        if (cur.kind == TokenVertex::Round) {
            // Letters on which every Adam token can only enter an empty-language state lose for Adam.
            std::vector<int> letters;
            for (int a = 0; a < m; ++a) {
                bool alive = false;
                for (int i = 0; i < k && !alive; ++i)
                    for (int t : g.adam[i].out(cur.p[i], a)) alive = alive || live[i][g.adam[i].trans[t].dst];
                if (alive) letters.push_back(a);
            }
            if (letters.empty()) letters.push_back(0);
            for (int a : letters) {
                TokenVertex n = cur;
                n.kind = TokenVertex::EveTurn;
                n.letter = a;
                std::vector<int> key{1, cur.q, a, cur.p[0], cur.p[1], cur.p[2]};
                int w = b.get(key, n, Player::Eve, "E[" + tuple_name(g, cur.q, cur.p, k) + "|" + g.eve.alphabet[a] + "]");
                g.arena.add_edge(v, w, pad, true);
            }
        } else if (cur.kind == TokenVertex::EveTurn) {
            for (int t : useful(g.eve, eve_live, g.eve.out(cur.q, cur.letter))) {
                TokenVertex n = cur;
                n.kind = TokenVertex::AdamTurn;
                n.trans = t;
                std::vector<int> key{2, t, cur.p[0], cur.p[1], cur.p[2]};
                int w = b.get(key, n, Player::Adam, "A[t" + std::to_string(t) + "|" + tuple_name(g, cur.q, cur.p, k) + "]");
                g.arena.add_edge(v, w, pad, true);
            }
        } else {
            const Transition& et = g.eve.trans[cur.trans];
            // All combinations of Adam transitions, first token varying slowest.
            std::vector<std::span<const int>> opts;
            std::vector<std::vector<int>> keep;
            for (int i = 0; i < k; ++i) keep.push_back(useful(g.adam[i], live[i], g.adam[i].out(cur.p[i], cur.letter)));
            for (int i = 0; i < k; ++i) opts.push_back(keep[i]);
            std::array<std::size_t, 3> idx{};
            while (true) {
                std::array<int, 3> np{};
                std::vector<int> col{et.prio};
                for (int i = 0; i < k; ++i) {
                    const Transition& at = g.adam[i].trans[opts[i][idx[i]]];
                    np[i] = at.dst;
                    col.push_back(at.prio);
                }
                int w = add_round(g, b, et.dst, np);
                g.arena.add_edge(v, w, col);
                int i = k - 1;
                while (i >= 0 && ++idx[i] == opts[i].size()) idx[i--] = 0;
                if (i < 0) break;
            }
        }
    }
    finish(g);
    return g;
}

TokenGame build_gk(const ParityAutomaton& a, int k, const std::vector<std::vector<int>>& starts, int cap) {
    if (k < 1) throw Error("k must be at least 1");
    if (k > cap) throw Error("token count " + std::to_string(k) + " exceeds the cap " + std::to_string(cap));
    return build_gk(a, std::vector<ParityAutomaton>(k, a), starts, cap);
}

TokenGame build_g1(const ParityAutomaton& eve, const ParityAutomaton& adam, const std::vector<std::vector<int>>& starts) {
    return build_gk(eve, std::vector<ParityAutomaton>{adam}, starts);
}

TokenGame build_sim(const ParityAutomaton& eve_in, const ParityAutomaton& adam_in,
                    const std::vector<std::vector<int>>& starts) {
    if (eve_in.alphabet != adam_in.alphabet) throw Error("alphabet mismatch");
    TokenGame g;
    g.kind = TokenKind::Sim;
    g.k = 1;
    g.eve = completed(eve_in);
    g.adam = {completed(adam_in)};
    const ParityAutomaton& B = g.adam[0];
    g.cond = implication_condition(B.lo, B.hi, g.eve.lo, g.eve.hi);
    g.arena.dim = 2;
    const std::vector<int> pad = neutral_colour(g.cond);
    ArenaBuilder b(g);
    for (auto& s : starts) {
        if (s.size() != 2) throw Error("simulation start must be a pair");
        g.roots.push_back(add_round(g, b, s[0], {s[1], 0, 0}));
    }
    for (int v; b.pop(v);) {
        const TokenVertex cur = g.info[v];
        if (cur.kind == TokenVertex::Round) {
            for (int a = 0; a < g.eve.num_letters(); ++a) {
                TokenVertex n = cur;
                n.kind = TokenVertex::SimAdam;
                n.letter = a;
                int w = b.get({3, cur.q, cur.p[0], a}, n, Player::Adam,
                              "S[" + tuple_name(g, cur.q, cur.p, 1) + "|" + g.eve.alphabet[a] + "]");
                g.arena.add_edge(v, w, pad, true);
            }
        } else if (cur.kind == TokenVertex::SimAdam) {
            for (int s : B.out(cur.p[0], cur.letter)) {
                TokenVertex n = cur;
                n.kind = TokenVertex::SimEve;
                n.trans = s;
                int w = b.get({4, cur.q, s}, n, Player::Eve, "T[" + g.eve.states[cur.q] + "|t" + std::to_string(s) + "]");
                g.arena.add_edge(v, w, pad, true);
            }
        } else {
            const Transition& at = B.trans[cur.trans];
            for (int t : g.eve.out(cur.q, cur.letter)) {
                const Transition& et = g.eve.trans[t];
                int w = add_round(g, b, et.dst, {at.dst, 0, 0});
                g.arena.add_edge(v, w, {at.prio, et.prio});
            }
        }
    }
    finish(g);
    return g;
}

TokenGame build_joker(const ParityAutomaton& a_in, const std::vector<std::vector<int>>& starts) {
    TokenGame g;
    g.kind = TokenKind::Joker;
    g.k = 1;
    g.eve = completed(a_in);
    if (g.eve.lo == 0) g.eve = shift_priorities(g.eve, 2);
    g.adam = {g.eve};
    const ParityAutomaton& A = g.eve;
    g.cond = implication_condition(std::min(1, A.lo), A.hi, A.lo, A.hi);
    g.arena.dim = 2;
    const std::vector<int> pad = neutral_colour(g.cond);
    ArenaBuilder b(g);
    for (auto& s : starts) {
        if (s.size() != 2) throw Error("Joker start must be a pair");
        g.roots.push_back(add_round(g, b, s[0], {s[1], 0, 0}));
    }
    for (int v; b.pop(v);) {
        const TokenVertex cur = g.info[v];
        if (cur.kind == TokenVertex::Round) {
            for (int a = 0; a < A.num_letters(); ++a) {
                TokenVertex n = cur;
                n.kind = TokenVertex::EveTurn;
                n.letter = a;
                int w = b.get({1, cur.q, a, cur.p[0]}, n, Player::Eve,
                              "E[" + tuple_name(g, cur.q, cur.p, 1) + "|" + A.alphabet[a] + "]");
                g.arena.add_edge(v, w, pad, true);
            }
        } else if (cur.kind == TokenVertex::EveTurn) {
            for (int t : A.out(cur.q, cur.letter)) {
                TokenVertex n = cur;
                n.kind = TokenVertex::AdamTurn;
                n.trans = t;
                int w = b.get({2, t, cur.p[0]}, n, Player::Adam,
                              "A[t" + std::to_string(t) + "|" + A.states[cur.p[0]] + "]");
                g.arena.add_edge(v, w, pad, true);
            }
        } else {
            const Transition& et = A.trans[cur.trans];
            for (int s : A.out(cur.p[0], cur.letter)) {
                const Transition& at = A.trans[s];
                g.arena.add_edge(v, add_round(g, b, et.dst, {at.dst, 0, 0}), {at.prio, et.prio});
            }
            // Joker: restart Adam's token from Eve's previous state.
            for (int s : A.out(et.src, cur.letter)) {
                const Transition& at = A.trans[s];
                g.arena.add_edge(v, add_round(g, b, et.dst, {at.dst, 0, 0}), {1, et.prio});
            }
        }
    }
    finish(g);
    return g;
}

TokenGame build_lookahead(const ParityAutomaton& a, int k) {
    if (k < 0) throw Error("lookahead depth must be nonnegative");
    ParityAutomaton d = delay(a, k);
    return build_g1(a, d, {{a.initial, d.initial}});
}

TokenSolution solve_token_game(const TokenGame& g) {
    TokenSolution s;
    s.ms = solve_muller(g.arena, g.cond, g.tree, g.roots);
    return s;
}

bool eve_wins_from(const TokenGame& g, const TokenSolution& s, const std::vector<int>& tuple) {
    int v = g.round_vertex(tuple);
    if (v < 0) throw Error("start tuple not in the arena");
    return s.eve_wins_vertex(v);
}

namespace {

bool initial_win(const TokenGame& g) {
    TokenSolution s = solve_token_game(g);
    return s.eve_wins_vertex(g.arena.initial);
}

}  // namespace

bool eve_wins_gk(const ParityAutomaton& a, int k) {
    return initial_win(build_gk(a, k, {std::vector<int>(k + 1, a.initial)}));
}

bool eve_wins_g2_by_rules(const ParityAutomaton& a_in) {
    ParityAutomaton a = completed(a_in);
    if (a.lo != 0) return eve_wins_gk(a, 2);
    TokenGame g = build_gk(a, 2, {{a.initial, a.initial, a.initial}});
    static std::mutex mu;
    static std::map<int, TwoTokenCondition> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(a.hi);
        if (it == cache.end()) it = cache.emplace(a.hi, build_2token_condition(a.hi)).first;
        if (it->second.cond.lo != g.cond.lo || it->second.cond.hi != g.cond.hi)
            throw Error("internal: 2-token colour ranges differ");
        g.tree = it->second.tree;
    }
    return initial_win(g);
}

bool eve_wins_g1(const ParityAutomaton& eve, const ParityAutomaton& adam) {
    return initial_win(build_g1(eve, adam, {{eve.initial, adam.initial}}));
}

bool eve_wins_sim(const ParityAutomaton& eve, const ParityAutomaton& adam) {
    return initial_win(build_sim(eve, adam, {{eve.initial, adam.initial}}));
}

bool eve_wins_joker(const ParityAutomaton& a) {
    return initial_win(build_joker(a, {{a.initial, a.initial}}));
}

bool eve_wins_lookahead(const ParityAutomaton& a, int k) { return initial_win(build_lookahead(a, k)); }

// ---------------------------------------------------------------------------
// Explicit Büchi 1-token game

G1BuchiGame build_g1_buchi(const ParityAutomaton& a_in, const std::vector<std::pair<int, int>>& starts) {
    ParityAutomaton a = completed(a_in);
    if (a.hi > 1) throw Error("g1-buchi needs a Büchi automaton (priorities 0 and 1)");
    G1BuchiGame g;
    ParityGame& pg = g.game;
    std::map<std::array<int, 4>, int> ids;
    std::deque<int> work;
    auto get = [&](std::array<int, 4> key, TokenVertex info, Player owner, std::string name) {
        auto [it, fresh] = ids.try_emplace(key, -1);
        if (fresh) {
            it->second = pg.add_vertex(owner, std::move(name));
            g.info.push_back(info);
            work.push_back(it->second);
            if (key[0] == 0) g.v1[{key[1], key[2]}] = it->second;
        }
        return it->second;
    };
    auto v1 = [&](int q, int p) {
        TokenVertex i;
        i.q = q;
        i.p[0] = p;
        return get({0, q, p, 0}, i, Player::Adam, "V1[" + a.states[q] + "|" + a.states[p] + "]");
    };
    for (auto [q, p] : starts) v1(q, p);
    for (bool first = true; !work.empty(); first = false) {
        (void)first;
        int v = work.front();
        work.pop_front();
        TokenVertex cur = g.info[v];
        if (cur.kind == TokenVertex::Round) {
            for (int l = 0; l < a.num_letters(); ++l) {
                TokenVertex n = cur;
                n.kind = TokenVertex::EveTurn;
                n.letter = l;
                int w = get({1, cur.q, l, cur.p[0]}, n, Player::Eve,
                            "V2[" + a.states[cur.q] + "|" + a.alphabet[l] + "|" + a.states[cur.p[0]] + "]");
                pg.add_edge(v, w, 2);
            }
        } else if (cur.kind == TokenVertex::EveTurn) {
            for (int t : a.out(cur.q, cur.letter)) {
                const Transition& et = a.trans[t];
                TokenVertex n = cur;
                n.kind = TokenVertex::AdamTurn;
                n.q = et.dst;
                n.trans = t;
                int w = get({2, et.dst, cur.p[0], cur.letter}, n, Player::Adam,
                            "V3[" + a.states[et.dst] + "|" + a.states[cur.p[0]] + "|" + a.alphabet[cur.letter] + "]");
                pg.add_edge(v, w, et.prio == 0 ? 0 : 2);
            }
        } else {
            for (int s : a.out(cur.p[0], cur.letter)) {
                const Transition& at = a.trans[s];
                pg.add_edge(v, v1(cur.q, at.dst), at.prio == 0 ? 1 : 2);
            }
        }
    }
    pg.check();
    return g;
}

G1BuchiGame build_g1_buchi(const ParityAutomaton& a_in) {
    ParityAutomaton a = completed(a_in);
    WcrPartition w = weak_coreachability(a);
    std::vector<std::pair<int, int>> starts;
    for (auto& cls : w.classes)
        for (int q : cls)
            for (int p : cls) starts.push_back({q, p});
    return build_g1_buchi(a, starts);
}

// ---------------------------------------------------------------------------
// Explicit 2-token game

G2ExplicitGame build_g2_explicit(const ParityAutomaton& a_in) {
    G2ExplicitGame g;
    g.aut = completed(a_in);
    const ParityAutomaton& A = g.aut;
    const int K = A.hi;
    g.cond = build_2token_condition(K);
    const ZielonkaTree& Z = g.cond.tree;
    const int nb = Z.num_branches();
    const int h = Z.height();
    WcrPartition w = weak_coreachability(A);
    ParityGame& pg = g.game;
    std::map<std::array<int, 6>, int> ids;
    auto get = [&](std::array<int, 6> key, TokenVertex info, int branch, Player owner, std::string name) {
        auto [it, fresh] = ids.try_emplace(key, -1);
        if (fresh) {
            it->second = pg.add_vertex(owner, std::move(name));
            g.info.push_back(info);
            g.branch_of.push_back(branch);
        }
        return it->second;
    };
    auto bname = [](int b) { return "b" + std::to_string(b); };
    // V1 over all WCR triples and branches.
    for (auto& cls : w.classes)
        for (int q : cls)
            for (int p1 : cls)
                for (int p2 : cls)
                    for (int b = 0; b < nb; ++b) {
                        TokenVertex i;
                        i.q = q;
                        i.p = {p1, p2, 0};
                        int v = get({0, q, p1, p2, b, 0}, i, b, Player::Adam,
                                    "V1[" + A.states[q] + "|" + A.states[p1] + "," + A.states[p2] + "|" + bname(b) + "]");
                        g.v1[{q, p1, p2, b}] = v;
                    }
    const int nv1 = pg.num_vertices();
    for (int v = 0; v < nv1; ++v) {
        const TokenVertex cur = g.info[v];
        const int b = g.branch_of[v];
        for (int l = 0; l < A.num_letters(); ++l) {
            TokenVertex n = cur;
            n.kind = TokenVertex::EveTurn;
            n.letter = l;
            int v2 = get({1, cur.q, l, cur.p[0], cur.p[1], b}, n, b, Player::Eve,
                         "V2[" + A.states[cur.q] + "|" + A.alphabet[l] + "|" + A.states[cur.p[0]] + "," +
                             A.states[cur.p[1]] + "|" + bname(b) + "]");
            pg.add_edge(v, v2, h + 1);
            for (int t : A.out(cur.q, l)) {
                TokenVertex m = n;
                m.kind = TokenVertex::AdamTurn;
                m.trans = t;
                auto [it, fresh] = ids.try_emplace({2, t, cur.p[0], cur.p[1], b, 0}, -1);
                if (fresh) {
                    it->second = pg.add_vertex(Player::Adam, "V3[t" + std::to_string(t) + "|" + A.states[cur.p[0]] +
                                                                 "," + A.states[cur.p[1]] + "|" + bname(b) + "]");
                    g.info.push_back(m);
                    g.branch_of.push_back(b);
                    const Transition& et = A.trans[t];
                    for (int s1 : A.out(cur.p[0], l))
                        for (int s2 : A.out(cur.p[1], l)) {
                            const Transition& a1 = A.trans[s1];
                            const Transition& a2 = A.trans[s2];
                            auto [d, b2] = Z.step(b, g.cond.cond.encode({et.prio, a1.prio, a2.prio}));
                            pg.add_edge(it->second, g.v1.at({et.dst, a1.dst, a2.dst, b2}), d);
                        }
                }
                pg.add_edge(v2, it->second, h + 1);
            }
        }
    }
    pg.check();
    return g;
}

// ---------------------------------------------------------------------------
// Everywhere checks and extraction

EverywhereResult wins_everywhere(const ParityAutomaton& a_in, int k) {
    if (k != 1 && k != 2) throw Error("wins_everywhere supports k = 1 or 2");
    ParityAutomaton a = completed(a_in);
    WcrPartition w = weak_coreachability(a);
    std::vector<std::vector<int>> starts;
    for (auto& cls : w.classes)
        for (int q : cls)
            for (int p1 : cls) {
                if (k == 1) {
                    starts.push_back({q, p1});
                    continue;
                }
                for (int p2 : cls) starts.push_back({q, p1, p2});
            }
    TokenGame g = build_gk(a, k, starts);
    TokenSolution s = solve_token_game(g);
    EverywhereResult r;
    for (auto& t : starts) {
        bool win = eve_wins_from(g, s, t);
        r.verdict[t] = win;
        r.all = r.all && win;
    }
    return r;
}

namespace {

// Eve transitions used by her product strategy on plays from `start`; Adam edges
// are filtered by `allow` (arena vertex of the Adam turn, arena edge).
std::vector<char> used_transitions(const TokenGame& g, const TokenSolution& s, int start_vertex,
                                   const std::function<bool(int, int)>& allow) {
    const MullerProduct& mp = s.ms.product;
    const ParityGame& pg = mp.game;
    if (!s.ms.sol.eve_wins[mp.vertex(start_vertex, 0)]) throw Error("Eve does not win the game");
    auto outs = pg.out_edges();
    std::vector<char> seen(pg.num_vertices(), 0), used(g.eve.num_trans(), 0);
    std::vector<int> work{mp.vertex(start_vertex, 0)};
    seen[work[0]] = 1;
    while (!work.empty()) {
        int pv = work.back();
        work.pop_back();
        const int av = mp.arena_vertex[pv];
        std::vector<int> next;
        if (pg.owner[pv] == Player::Eve) {
            int e = s.ms.sol.strategy[pv];
            if (e < 0) throw Error("internal: missing Eve strategy on a winning vertex");
            next.push_back(e);
            int ae = mp.edge_origin[e];
            const TokenVertex& tv = g.info[g.arena.dst[ae]];
            if (g.info[av].kind == TokenVertex::EveTurn) used[tv.trans] = 1;
        } else {
            for (int e : outs[pv])
                if (allow(av, mp.edge_origin[e])) next.push_back(e);
        }
        for (int e : next) {
            int x = pg.dst[e];
            if (!seen[x]) {
                seen[x] = 1;
                work.push_back(x);
            }
        }
    }
    return used;
}

}  // namespace

ParityAutomaton extract_subautomaton(const ParityAutomaton& a_in, ExtractMode mode) {
    ParityAutomaton a = completed(a_in);
    std::vector<char> used;
    if (mode == ExtractMode::TheoremI) {
        TokenGame g = build_gk(a, 3, {{a.initial, a.initial, a.initial, a.initial}});
        TokenSolution s = solve_token_game(g);
        // Adam's third token copies Eve's transition.
        auto allow = [&](int av, int ae) {
            const TokenVertex& tv = g.info[av];
            if (tv.kind != TokenVertex::AdamTurn) return true;
            const Transition& et = g.eve.trans[tv.trans];
            const TokenVertex& to = g.info[g.arena.dst[ae]];
            return to.p[2] == et.dst && g.arena.colour[static_cast<std::size_t>(ae) * g.arena.dim + 3] == et.prio;
        };
        used = used_transitions(g, s, g.arena.initial, allow);
    } else {
        TokenGame g = build_joker(a, {{a.initial, a.initial}});
        TokenSolution s = solve_token_game(g);
        used = used_transitions(g, s, g.arena.initial, [](int, int) { return true; });
    }
    return sub_automaton(a, used);
}

}  // namespace hdtk
