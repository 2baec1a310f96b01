#include "hdtk/normal_forms.hpp"

#include <algorithm>
#include <random>

namespace hdtk {

const char* coverage_name(Coverage c) {
    switch (c) {
        case Coverage::Safe: return "safe";
        case Coverage::Reach: return "reach";
        case Coverage::OneSafeDouble: return "one-safe-double";
        case Coverage::ZeroReachDouble: return "zero-reach-double";
    }
    return "?";
}

Coverage parse_coverage(const std::string& s) {
    for (Coverage c : {Coverage::Safe, Coverage::Reach, Coverage::OneSafeDouble, Coverage::ZeroReachDouble})
        if (s == coverage_name(c)) return c;
    throw Error("unknown coverage kind '" + s + "'");
}

namespace {

ParityAutomaton complete(const ParityAutomaton& a) { return validate_and_complete(a, CompleteMode::AddRejectingSink); }

ParityAutomaton prepare(const ParityAutomaton& a) { return complete(trim(complete(a))); }

std::vector<int> sorted_class(const WcrPartition& w, int q) {
    std::vector<int> c = w.classes[w.cls[q]];
    std::sort(c.begin(), c.end());
    return c;
}

}  // namespace

CoverageResult coverage_check(const ParityAutomaton& a_in, Coverage kind) {
    const bool has0 = a_in.has_priority(0);
    switch (kind) {
        case Coverage::Safe:
            if (has0 || a_in.hi > 2) throw Error("safe-coverage needs a coBüchi automaton (priorities 1 and 2)");
            break;
        case Coverage::Reach:
            if (a_in.hi > 1) throw Error("reach-covering needs a Büchi automaton (priorities 0 and 1)");
            break;
        case Coverage::OneSafeDouble:
            if (has0) throw Error("1-safe double-coverage needs priorities >= 1");
            break;
        case Coverage::ZeroReachDouble:
            break;
    }
    ParityAutomaton a = complete(a_in);
    const Approx ap = kind == Coverage::Safe            ? Approx::Safe
                      : kind == Coverage::Reach         ? Approx::Reach
                      : kind == Coverage::OneSafeDouble ? Approx::Above1
                                                        : Approx::Above0;
    ParityAutomaton x = approximate(a, ap);
    WcrPartition w = weak_coreachability(a);
    const int k = kind == Coverage::Safe || kind == Coverage::Reach ? 1 : 2;
    auto tuple = [&](int q, int p) -> std::vector<int> {
        switch (kind) {
            case Coverage::Safe: return {p, q};
            case Coverage::Reach: return {q, p};
            case Coverage::OneSafeDouble: return {p, q, q};
            case Coverage::ZeroReachDouble: return {q, p, p};
        }
        return {};
    };
    std::vector<std::vector<int>> starts;
    for (int q = 0; q < a.num_states(); ++q)
        if (w.cls[q] >= 0)
            for (int p : w.classes[w.cls[q]]) starts.push_back(tuple(q, p));
    TokenGame g = build_gk(x, k, starts);
    TokenSolution sol = solve_token_game(g);
    CoverageResult r;
    r.states = a.states;
    r.witness.assign(a.num_states(), -1);
    for (int q = 0; q < a.num_states(); ++q) {
        if (w.cls[q] < 0) continue;
        for (int p : sorted_class(w, q))
            if (eve_wins_from(g, sol, tuple(q, p))) {
                r.witness[q] = p;
                break;
            }
        if (r.witness[q] < 0 && r.ok) {
            r.ok = false;
            r.failing = q;
        }
    }
    return r;
}

bool StateClassification::all_opt_zero() const {
    for (const StateClass& s : states)
        if (s.opt > 0) return false;
    return true;
}

bool StateClassification::all_right() const {
    for (const StateClass& s : states)
        if (s.opt >= 0 && !s.right) return false;
    return true;
}

namespace {

StateClassification classify(const ParityAutomaton& a_in, bool validate) {
    StateClassification sc;
    sc.aut = complete(a_in);
    const ParityAutomaton& a = sc.aut;
    const int n = a.num_states();
    sc.states.assign(n, {});
    WcrPartition w = weak_coreachability(a);
    if (a.hi == 0) {
        sc.right_branch = {1};
        for (int q = 0; q < n; ++q)
            if (w.cls[q] >= 0) sc.states[q] = {0, true, {q, q, 0}};
        return sc;
    }
    G2ExplicitGame g = build_g2_explicit(a);
    Solution s = solve_parity(g.game);
    for (auto& [key, v] : g.v1)
        if (!s.eve_wins[v])
            throw Error("Eve does not win the 2-token game from (" + a.states[key[0]] + "; " + a.states[key[1]] + ", " +
                        a.states[key[2]] + ")");
    RankTable rt = compute_ranks(g.game);

    const ZielonkaTree& z = g.cond.tree;
    const MullerCondition& cond = g.cond.cond;
    ColourSet top(cond.num_colours());
    for (int c = 0; c < cond.num_colours(); ++c) {
        auto t = cond.decode(c);
        if (t[0] >= 1 && t[1] >= 1 && t[2] >= 1) top.set(c);
    }
    sc.right_branch.assign(z.num_branches(), 0);
    for (int b = 0; b < z.num_branches(); ++b)
        for (int v : z.branch_nodes(b))
            if (z.nodes[v].label == top) sc.right_branch[b] = 1;
    std::vector<int> order;
    for (int pass = 1; pass >= 0; --pass)
        for (int b = 0; b < z.num_branches(); ++b)
            if (sc.right_branch[b] == pass) order.push_back(b);

    for (int q = 0; q < n; ++q) {
        if (w.cls[q] < 0) continue;
        StateClass& st = sc.states[q];
        auto cls = sorted_class(w, q);
        for (int p1 : cls)
            for (int p2 : cls)
                for (int b = 0; b < z.num_branches(); ++b) {
                    int r = rt.rank[g.v1.at({q, p1, p2, b})];
                    if (st.opt < 0 || r < st.opt) st.opt = r;
                }
        if (st.opt != 0) continue;
        for (int b : order) {
            for (int p1 : cls) {
                for (int p2 : cls)
                    if (rt.rank[g.v1.at({q, p1, p2, b})] == 0) {
                        st.witness = {p1, p2, b};
                        break;
                    }
                if (st.witness[0] >= 0) break;
            }
            if (st.witness[0] >= 0) break;
        }
        st.right = sc.right_branch[st.witness[2]] != 0;
    }

    if (validate) {
        ParityAutomaton above = approximate(a, Approx::Above0);
        std::vector<std::vector<int>> starts;
        for (int q = 0; q < n; ++q)
            if (sc.states[q].right) starts.push_back({q, sc.states[q].witness[0], sc.states[q].witness[1]});
        if (!starts.empty()) {
            TokenGame g2 = build_gk(above, 2, starts);
            TokenSolution sol = solve_token_game(g2);
            for (auto& t : starts)
                if (!eve_wins_from(g2, sol, t)) {
                    sc.right_witnesses_win = false;
                    sc.right_witness_failure = t[0];
                    break;
                }
        }
    }
    return sc;
}

}  // namespace

StateClassification classify_states(const ParityAutomaton& a) { return classify(a, true); }

namespace {

bool g2_everywhere(const ParityAutomaton& a) { return wins_everywhere(a, 2).all; }

void check_invariants(const ParityAutomaton& input, const ParityAutomaton& x, const char* stage) {
    if (!eve_wins_sim(input, x) || !eve_wins_sim(x, input))
        throw Error(std::string("normalisation: simulation-equivalence lost after ") + stage);
    if (!g2_everywhere(x)) throw Error(std::string("normalisation: 2-token game lost after ") + stage);
}

struct RankReduced {
    ParityAutomaton aut;
    StateClassification cls;
};

RankReduced rank_reduce_g2(const ParityAutomaton& in, NormalStep& step) {
    ParityAutomaton b = prepare(in);
    const int cap = b.num_trans() + 2;
    for (int it = 0;; ++it) {
        if (it > cap) throw Error("rank reduction did not stabilise");
        StateClassification cls = classify(b, false);
        ++step.rank_rounds;
        ParityAutomaton c = b;
        c.trans.clear();
        bool changed = false;
        for (const Transition& t : b.trans) {
            const int os = cls.states[t.src].opt, od = cls.states[t.dst].opt;
            if (t.prio > 0 && os < od) {
                ++step.removed_by_rank;
                changed = true;
                continue;
            }
            Transition u = t;
            if (t.prio > 0 && os > od) {
                u.prio = 0;
                ++step.relabelled_by_rank;
                changed = true;
            }
            c.trans.push_back(u);
        }
        if (!changed) return {b, std::move(cls)};
        c.finalize();
        b = prepare(c);
    }
}

}  // namespace

ParityAutomaton normalize_even(const ParityAutomaton& a_in, const NormalizeOptions& opts, std::vector<NormalStep>* trace) {
    ParityAutomaton input = complete(a_in);
    ParityAutomaton cur = prepare(input);
    if (!g2_everywhere(cur)) throw Error("Eve does not win the 2-token game from everywhere");
    const long cap = static_cast<long>(cur.hi + 1) * cur.num_trans() + 2;
    for (long i = 0;; ++i) {
        if (i > cap) throw Error("normalisation exceeded its iteration bound");
        NormalStep step;
        step.iteration = static_cast<int>(i);
        RankReduced rr = rank_reduce_g2(cur, step);
        const ParityAutomaton& b = rr.aut;
        if (opts.paranoid) check_invariants(input, b, "rank-reduction");
        std::vector<char> right(b.num_states(), 0);
        for (int q = 0; q < b.num_states(); ++q) {
            if (rr.cls.states[q].opt != 0) throw Error("internal: nonzero optimal rank after rank reduction");
            right[q] = rr.cls.states[q].right;
        }

        ParityAutomaton c = b;
        c.trans.clear();
        for (const Transition& t : b.trans) {
            const bool cut = (right[t.src] && !right[t.dst] && t.prio >= 1) || (!right[t.src] && t.prio == 1);
            if (cut) ++step.removed_by_separation;
            else c.trans.push_back(t);
        }
        c.finalize();
        if (opts.paranoid) check_invariants(input, c, "branch-separation");

        for (Transition& t : c.trans)
            if (!right[t.src] && t.prio >= 2) {
                t.prio -= 2;
                ++step.reduced;
            } else if (!right[t.src] && t.prio == 1) {
                throw Error("internal: priority 1 left on a non-right state");
            }
        c.finalize();
        if (opts.paranoid) check_invariants(input, c, "priority-reduction");

        ParityAutomaton next = prepare(c);
        step.states_after = next.num_states();
        if (trace) trace->push_back(step);
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

TransformReport validate_transformation(const ParityAutomaton& a_in, const ParityAutomaton& b_in, std::uint64_t seed,
                                        int samples) {
    if (a_in.alphabet != b_in.alphabet) throw Error("alphabet mismatch");
    ParityAutomaton a = complete(a_in), b = complete(b_in);
    TransformReport r;
    r.a_simulates_b = eve_wins_sim(a, b);
    r.b_simulates_a = eve_wins_sim(b, a);
    r.g1_everywhere = wins_everywhere(b, 1).all;
    r.g2_everywhere = wins_everywhere(b, 2).all;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < samples; ++i) {
        LassoWord w = random_lasso(rng(), a.num_letters(), 6, 6);
        ++r.lassos;
        if (lasso_member(a, w) != lasso_member(b, w)) {
            r.lassos_agree = false;
            r.mismatch = w;
            break;
        }
    }
    return r;
}

NormalFormReport check_normal_form(const ParityAutomaton& a, const ParityAutomaton& b, std::uint64_t seed, int samples) {
    NormalFormReport r;
    try {
        StateClassification cls = classify_states(b);
        r.all_opt_zero = cls.all_opt_zero();
        r.all_right = cls.all_right();
    } catch (const Error&) {
    }
    r.zero_reach_double = coverage_check(b, Coverage::ZeroReachDouble).ok;
    r.transform = validate_transformation(a, b, seed, samples);
    return r;
}

}  // namespace hdtk
