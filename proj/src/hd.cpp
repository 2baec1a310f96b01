#include "hdtk/hd.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace hdtk {

namespace {

// Vertices reachable from `start` when `player` follows `strategy` and the opponent moves freely.
std::vector<char> strategy_closure(const ParityGame& g, const std::vector<int>& strategy, Player player, int start) {
    auto outs = g.out_edges();
    std::vector<char> seen(g.num_vertices(), 0);
    std::vector<int> work{start};
    seen[start] = 1;
    while (!work.empty()) {
        int v = work.back();
        work.pop_back();
        std::vector<int> next;
        if (g.owner[v] == player) {
            if (strategy[v] < 0) continue;  // reported by verify_strategy
            next.push_back(strategy[v]);
        } else {
            next = outs[v];
        }
        for (int e : next)
            if (!seen[g.dst[e]]) {
                seen[g.dst[e]] = 1;
                work.push_back(g.dst[e]);
            }
    }
    return seen;
}

}  // namespace

HdVerdict check_hd(const ParityAutomaton& a) {
    HdVerdict v;
    v.game = build_gk(a, 2, {{a.initial, a.initial, a.initial}});
    v.solution = solve_token_game(v.game);
    v.hd = v.solution.eve_wins_vertex(v.game.arena.initial);
    v.winner = v.hd ? Player::Eve : Player::Adam;
    const ParityGame& pg = v.solution.ms.product.game;
    const Solution& s = v.solution.ms.sol;
    v.certificate_ok = verify_strategy(pg, s.strategy, v.winner, s.region(v.winner));
    return v;
}

std::string HdVerdict::certificate() const {
    const ParityGame& pg = solution.ms.product.game;
    const Solution& s = solution.ms.sol;
    std::ostringstream os;
    os << "HDTK-CERT 1\n";
    os << "winner " << player_name(winner) << "\n";
    os << pg.dump();
    std::vector<char> keep = strategy_closure(pg, s.strategy, winner, pg.initial);
    for (int u = 0; u < pg.num_vertices(); ++u)
        if (keep[u] && pg.owner[u] == winner) os << "strategy " << u << " " << s.strategy[u] << "\n";
    return os.str();
}

bool verify_certificate(const std::string& text) {
    std::istringstream in(text);
    std::string line, arena_text;
    Player winner = Player::Eve;
    bool header = false, have_winner = false;
    std::vector<std::pair<int, int>> strat;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "HDTK-CERT") {
            header = true;
        } else if (key == "winner") {
            std::string w;
            ls >> w;
            if (w != "Eve" && w != "Adam") throw Error("certificate: bad winner '" + w + "'");
            winner = w == "Eve" ? Player::Eve : Player::Adam;
            have_winner = true;
        } else if (key == "strategy") {
            int u, e;
            if (!(ls >> u >> e)) throw Error("certificate: malformed strategy line");
            strat.push_back({u, e});
        } else {
            arena_text += line + "\n";
        }
    }
    if (!header || !have_winner) throw Error("certificate: missing header or winner");
    ParityGame g = parse_arena(arena_text);
    std::vector<int> strategy(g.num_vertices(), -1);
    for (auto [u, e] : strat) {
        if (u < 0 || u >= g.num_vertices() || e < 0 || e >= g.num_edges()) throw Error("certificate: strategy out of range");
        strategy[u] = e;
    }
    std::vector<char> region = strategy_closure(g, strategy, winner, g.initial);
    try {
        return verify_strategy(g, strategy, winner, region);
    } catch (const Error&) {
        return false;
    }
}

bool hd_oracle_vs_det(const ParityAutomaton& a_in, const ParityAutomaton& d_in, std::uint64_t seed, int samples) {
    if (a_in.alphabet != d_in.alphabet) throw Error("alphabet mismatch");
    if (!d_in.is_deterministic()) throw Error("the reference automaton is not deterministic");
    ParityAutomaton a = validate_and_complete(a_in, CompleteMode::AddRejectingSink);
    ParityAutomaton d = validate_and_complete(d_in, CompleteMode::AddRejectingSink);
    if (!included_in_deterministic(a, d)) throw Error("language preflight failed: L(A) is not contained in L(D)");
    std::mt19937_64 rng(seed);
    for (int i = 0; i < samples; ++i) {
        LassoWord w = random_lasso(rng(), a.num_letters(), 6, 6);
        if (lasso_member(d, w) && !lasso_member(a, w))
            throw Error("language preflight failed: a sampled word of D is rejected by A");
    }
    return eve_wins_sim(a, d);
}

bool inclusion_hd(const ParityAutomaton& a, const ParityAutomaton& h, bool assume_hd) {
    if (a.alphabet != h.alphabet) throw Error("alphabet mismatch");
    if (!assume_hd && !check_hd(h).hd) throw Error("the right-hand automaton is not history-deterministic");
    ParityAutomaton b = parity_to_buchi(validate_and_complete(a, CompleteMode::AddRejectingSink));
    return eve_wins_sim(h, b);
}

bool inclusion_oracle_det(const ParityAutomaton& a, const ParityAutomaton& d, LassoWord* counterexample) {
    if (a.alphabet != d.alphabet) throw Error("alphabet mismatch");
    if (!d.is_deterministic()) throw Error("the right-hand automaton is not deterministic");
    return included_in_deterministic(validate_and_complete(a, CompleteMode::AddRejectingSink),
                                     validate_and_complete(d, CompleteMode::AddRejectingSink), counterexample);
}

std::vector<SdEntry> sd_witness(const ParityAutomaton& a_in) {
    ParityAutomaton a = validate_and_complete(a_in, CompleteMode::AddRejectingSink);
    std::vector<SdEntry> out;
    std::vector<std::vector<int>> starts;
    for (int q = 0; q < a.num_states(); ++q)
        for (int l = 0; l < a.num_letters(); ++l) {
            SdEntry e;
            e.state = q;
            e.letter = l;
            for (int t : a.out(q, l)) {
                int s = a.trans[t].dst;
                if (std::find(e.successors.begin(), e.successors.end(), s) == e.successors.end()) e.successors.push_back(s);
            }
            for (int s : e.successors)
                for (int r : e.successors)
                    if (s != r) starts.push_back({s, r});
            out.push_back(std::move(e));
        }
    if (starts.empty()) {
        for (auto& e : out) e.witnessed = true;
        return out;
    }
    TokenGame g = build_g1(a, a, starts);
    TokenSolution sol = solve_token_game(g);
    for (auto& e : out) {
        e.witnessed = true;
        for (int s : e.successors)
            for (int r : e.successors)
                if (s != r && !eve_wins_from(g, sol, {s, r})) e.witnessed = false;
    }
    return out;
}

}  // namespace hdtk
