#include "hdtk/buchi_det.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "hdtk/hd.hpp"

namespace hdtk {

namespace {

ParityAutomaton prepare(const ParityAutomaton& a) {
    if (a.hi > 1) throw Error("expected a Büchi automaton (priorities 0 and 1)");
    return validate_and_complete(trim(a), CompleteMode::AddRejectingSink);
}

std::vector<std::pair<int, int>> wcr_pairs(const WcrPartition& w) {
    std::vector<std::pair<int, int>> out;
    for (auto& cls : w.classes)
        for (int q : cls)
            for (int p : cls) out.push_back({q, p});
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

OptRanks buchi_opt_ranks(const ParityAutomaton& a_in) {
    OptRanks r;
    r.aut = prepare(a_in);
    WcrPartition w = weak_coreachability(r.aut);
    r.game = build_g1_buchi(r.aut, wcr_pairs(w));
    Solution s = solve_parity(r.game.game);
    for (auto& [qp, v] : r.game.v1)
        if (!s.eve_wins[v])
            throw Error("Eve does not win the 1-token game from (" + r.aut.states[qp.first] + "; " +
                        r.aut.states[qp.second] + ")");
    r.ranks = compute_ranks(r.game.game);
    const int n = r.aut.num_states();
    r.opt.assign(n, -1);
    r.partner.assign(n, -1);
    for (auto& [qp, v] : r.game.v1) {
        auto [q, p] = qp;
        if (r.opt[q] < 0 || r.ranks.rank[v] < r.opt[q]) {
            r.opt[q] = r.ranks.rank[v];
            r.partner[q] = p;
        }
    }
    return r;
}

ParityAutomaton rank_reduce_buchi(const ParityAutomaton& a_in, std::vector<RankStep>* trace) {
    ParityAutomaton a = prepare(a_in);
    const int cap = a.num_trans() + 2;
    for (int it = 0;; ++it) {
        if (it > cap) throw Error("rank reduction did not stabilise");
        OptRanks r = buchi_opt_ranks(a);
        a = r.aut;
        RankStep step;
        step.states = a.states;
        step.opt = r.opt;
        ParityAutomaton b = a;
        b.trans.clear();
        for (const Transition& t : a.trans) {
            if (t.prio == 1 && r.opt[t.src] < r.opt[t.dst]) {
                step.removed.push_back(t);
                continue;
            }
            Transition u = t;
            if (t.prio == 1 && r.opt[t.src] > r.opt[t.dst]) {
                u.prio = 0;
                step.relabelled.push_back(t);
            }
            b.trans.push_back(u);
        }
        const bool changed = !step.removed.empty() || !step.relabelled.empty();
        if (trace) trace->push_back(std::move(step));
        if (!changed) return a;
        b.finalize();
        a = prepare(b);
    }
}

namespace {

// Eve's verdicts in G1 of the reachability approximation over WCR pairs, plus pairs with the sink.
struct ReachGame {
    ParityAutomaton aut;   // completed input
    ParityAutomaton reach;
    WcrPartition wcr;
    int sink = -1;         // accepting sink of reach, if any
    G1BuchiGame game;
    Solution sol;

    bool wins(int q, int p) const {
        auto it = game.v1.find({q, p});
        return it != game.v1.end() && sol.eve_wins[it->second];
    }
    bool reach_det(int p) const { return wins(p, p); }
};

ReachGame solve_reach_game(const ParityAutomaton& a) {
    ReachGame g;
    g.aut = a;
    g.reach = approximate(a, Approx::Reach);
    g.wcr = weak_coreachability(a);
    g.sink = g.reach.num_states() > a.num_states() ? a.num_states() : -1;  // approximate() appends the sink
    auto starts = wcr_pairs(g.wcr);
    if (g.sink >= 0)
        for (int q = 0; q < a.num_states(); ++q)
            if (g.wcr.cls[q] >= 0) starts.push_back({q, g.sink});
    g.game = build_g1_buchi(g.reach, starts);
    g.sol = solve_parity(g.game.game);
    return g;
}

}  // namespace

ReachCovering reach_covering_witness(const ParityAutomaton& a_in) {
    if (a_in.hi > 1) throw Error("expected a Büchi automaton (priorities 0 and 1)");
    ParityAutomaton a = validate_and_complete(a_in, CompleteMode::AddRejectingSink);
    ReachGame g = solve_reach_game(a);
    ReachCovering rc;
    rc.witness.assign(a.num_states(), -1);
    for (int q = 0; q < a.num_states(); ++q) {
        if (g.wcr.cls[q] < 0) continue;
        for (int p : g.wcr.classes[g.wcr.cls[q]])
            if (g.wins(q, p) && (rc.witness[q] < 0 || p < rc.witness[q])) rc.witness[q] = p;
        if (rc.witness[q] < 0 && rc.ok) {
            rc.ok = false;
            rc.failing = q;
        }
    }
    return rc;
}

std::vector<char> reach_deterministic_states(const ParityAutomaton& a_in) {
    if (a_in.hi > 1) throw Error("expected a Büchi automaton (priorities 0 and 1)");
    ParityAutomaton a = validate_and_complete(a_in, CompleteMode::AddRejectingSink);
    ParityAutomaton r = approximate(a, Approx::Reach);
    std::vector<std::pair<int, int>> starts;
    for (int p = 0; p < r.num_states(); ++p) starts.push_back({p, p});
    G1BuchiGame g = build_g1_buchi(r, starts);
    Solution s = solve_parity(g.game);
    std::vector<char> out(a_in.num_states(), 0);
    for (int p = 0; p < a_in.num_states(); ++p) out[p] = s.eve_wins[g.v1.at({p, p})];
    return out;
}

Pruning prune_det(const ParityAutomaton& s_in, const std::vector<int>& required) {
    ParityAutomaton s = validate_and_complete(s_in, CompleteMode::AddRejectingSink);
    const int n = s.num_states();
    std::vector<std::vector<int>> starts;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) starts.push_back({x, y});
    TokenGame g = build_g1(s, s, starts);
    TokenSolution sol = solve_token_game(g);
    std::vector<char> wins(static_cast<std::size_t>(n) * n, 0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) wins[static_cast<std::size_t>(x) * n + y] = eve_wins_from(g, sol, {x, y});
    auto covers = [&](int x, int y) { return wins[static_cast<std::size_t>(x) * n + y] != 0; };

    Pruning pr;
    pr.good.assign(n, 0);
    for (int p = 0; p < n; ++p) pr.good[p] = covers(p, p);
    for (int p : required)
        if (p < 0 || p >= n || !pr.good[p]) throw Error("Eve loses G1(p; p) at a requested state");

    // States from which Eve can force an accepting sink, with attractor levels.
    std::vector<int> level(n, -1);
    for (int q = 0; q < n; ++q) {
        bool sink = true;
        for (int l = 0; l < s.num_letters() && sink; ++l)
            for (int t : s.out(q, l)) sink = sink && s.trans[t].prio == 0 && s.trans[t].dst == q;
        if (sink) level[q] = 0;
    }
    for (int k = 1;; ++k) {
        std::vector<int> add;
        for (int q = 0; q < n; ++q) {
            if (level[q] >= 0) continue;
            bool all = true;
            for (int l = 0; l < s.num_letters() && all; ++l) {
                bool some = false;
                for (int t : s.out(q, l)) some = some || (level[s.trans[t].dst] >= 0);
                all = some;
            }
            if (all) add.push_back(q);
        }
        if (add.empty()) break;
        for (int q : add) level[q] = k;
    }

    pr.det = s;
    pr.det.trans.clear();
    for (int q = 0; q < n; ++q) {
        if (!pr.good[q]) continue;
        for (int l = 0; l < s.num_letters(); ++l) {
            int pick = -1;
            auto outs = s.out(q, l);
            if (level[q] >= 0) {
                for (int t : outs) {
                    int d = s.trans[t].dst;
                    if (level[d] >= 0 && (level[d] < level[q] || level[q] == 0)) {
                        pick = t;
                        break;
                    }
                }
            } else {
                for (int t : outs) {
                    int d = s.trans[t].dst;
                    bool ok = pr.good[d];
                    for (int u : outs) ok = ok && covers(d, s.trans[u].dst);
                    if (ok) {
                        pick = t;
                        break;
                    }
                }
            }
            if (pick < 0) throw Error("internal: no covering successor at " + s.states[q]);
            pr.det.trans.push_back(s.trans[pick]);
        }
    }
    pr.det.finalize();
    return pr;
}

ParityAutomaton det_from_reach_covering(const ParityAutomaton& a_in) {
    ParityAutomaton a = prepare(a_in);
    ReachGame g = solve_reach_game(a);
    Pruning dr = prune_det(g.reach);
    const int n = a.num_states();
    auto valid = [&](int q, int r) {
        if (!g.wins(q, r)) return false;
        if (r == g.sink) return true;
        return g.reach_det(r) && g.wcr.weakly(q, r);
    };
    auto reset = [&](int q) {
        for (int r = 0; r < n; ++r)
            if (g.wcr.weakly(q, r) && g.reach_det(r) && g.wins(q, r)) return r;
        throw Error("no reach-deterministic partner for " + a.states[q] + " (reach-covering fails)");
    };
    const ParityGame& pg = g.game.game;
    auto outs = pg.out_edges();
    // Eve's transition from (q; r) on a letter, from her positional strategy.
    auto eve_move = [&](int q, int r, int l) {
        int v1 = g.game.v1.at({q, r});
        for (int e : outs[v1]) {
            int v2 = pg.dst[e];
            if (g.game.info[v2].letter != l) continue;
            int f = g.sol.strategy[v2];
            if (f < 0) throw Error("internal: no strategy at a winning vertex");
            return g.game.info[pg.dst[f]].trans;
        }
        throw Error("internal: letter vertex missing");
    };

    ParityAutomaton d;
    d.alphabet = a.alphabet;
    std::map<std::pair<int, int>, int> id;
    std::deque<std::pair<int, int>> work;
    auto get = [&](int q, int r) {
        if (!valid(q, r)) throw Error("internal: invalid product state");
        auto [it, fresh] = id.try_emplace({q, r}, d.num_states());
        if (fresh) {
            d.states.push_back(a.states[q] + "|" + g.reach.states[r]);
            work.push_back({q, r});
        }
        return it->second;
    };
    d.initial = get(a.initial, reset(a.initial));
    while (!work.empty()) {
        auto [q, r] = work.front();
        work.pop_front();
        const int from = id.at({q, r});
        for (int l = 0; l < a.num_letters(); ++l) {
            const Transition& t = a.trans[eve_move(q, r, l)];
            int to;
            if (t.prio == 0) {
                to = get(t.dst, reset(t.dst));
            } else {
                auto rs = dr.det.out(r, l);
                if (rs.size() != 1) throw Error("internal: pruned reachability automaton is not deterministic");
                to = get(t.dst, dr.det.trans[rs[0]].dst);
            }
            d.trans.push_back({from, l, t.prio, to});
        }
    }
    d.finalize();
    return d;
}

ParityAutomaton determinize_hd_buchi(const ParityAutomaton& a_in, DetTrace* trace) {
    if (a_in.hi > 1) throw Error("expected a Büchi automaton (priorities 0 and 1)");
    const bool hd = check_hd(a_in).hd;
    const bool joker = eve_wins_joker(a_in);
    if (hd != joker) throw Error("internal: 2-token and Joker verdicts disagree on a Büchi automaton");
    if (!hd) throw Error("automaton is not history-deterministic");
    ParityAutomaton b = extract_subautomaton(a_in, ExtractMode::Joker);
    std::vector<RankStep> steps;
    ParityAutomaton n = rank_reduce_buchi(b, trace ? &steps : nullptr);
    ParityAutomaton d = det_from_reach_covering(n);
    if (trace) {
        trace->input_states = a_in.num_states();
        trace->extracted_transitions = b.num_trans();
        trace->steps = std::move(steps);
        trace->output_states = d.num_states();
    }
    return d;
}

}  // namespace hdtk
