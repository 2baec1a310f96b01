#include "hdtk/reductions.hpp"

#include <algorithm>
#include <future>
#include <set>
#include <sstream>

#include "hdtk/graph.hpp"
#include "hdtk/hd.hpp"
#include "hdtk/token_games.hpp"

namespace hdtk {

namespace {

int max_colour(const Arena& g, int comp) {
    int m = 0;
    for (int e = 0; e < g.num_edges(); ++e) m = std::max(m, g.colour[static_cast<std::size_t>(e) * g.dim + comp]);
    return m;
}

int c1(const Arena& g, int e) { return g.colour[static_cast<std::size_t>(e) * 2]; }
int c2(const Arena& g, int e) { return g.colour[static_cast<std::size_t>(e) * 2 + 1]; }

void require_dim2(const Arena& g) {
    if (g.dim != 2) throw Error("implication games need two colours per edge");
}

}  // namespace

ImplicationGame parse_igame(const std::string& text) {
    ImplicationGame g;
    g.arena = parse_arena(text);
    require_dim2(g.arena);
    g.good = check_good(g.arena);
    return g;
}

std::string serialize_igame(const ImplicationGame& g) { return g.arena.dump(); }

bool exists_cycle_with_minima(const Arena& g, const std::vector<char>& edge_mask, int p1, int p2) {
    require_dim2(g);
    Digraph dg(g.num_vertices());
    for (int e = 0; e < g.num_edges(); ++e) dg.add_edge(g.src[e], g.dst[e]);
    std::vector<char> base = edge_mask.empty() ? std::vector<char>(g.num_edges(), 1) : edge_mask;
    std::vector<char> reach = reachable_from(dg, {g.initial}, base);
    const int d1 = max_colour(g, 0), d2 = max_colour(g, 1);
    for (int a = p1; a <= d1; a += 2)
        for (int b = p2; b <= d2; b += 2) {
            std::vector<char> mask(g.num_edges(), 0);
            for (int e = 0; e < g.num_edges(); ++e)
                mask[e] = base[e] && reach[g.src[e]] && c1(g, e) >= a && c2(g, e) >= b;
            SccResult scc = strongly_connected(dg, mask);
            std::vector<char> has_a(scc.count, 0), has_b(scc.count, 0);
            for (int e = 0; e < g.num_edges(); ++e) {
                if (!mask[e] || scc.comp[g.src[e]] != scc.comp[g.dst[e]]) continue;
                int k = scc.comp[g.src[e]];
                if (c1(g, e) == a) has_a[k] = 1;
                if (c2(g, e) == b) has_b[k] = 1;
            }
            for (int k = 0; k < scc.count; ++k)
                if (has_a[k] && has_b[k]) return true;
        }
    return false;
}

bool check_good(const Arena& g) { return !exists_cycle_with_minima(g, {}, 1, 0); }

Arena make_bipartite(const Arena& in) {
    require_dim2(in);
    Arena g = in;
    g.names.resize(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) g.names[v] = in.vertex_name(v);
    if (g.owner[g.initial] != Player::Adam) {
        int w = g.add_vertex(Player::Adam, g.names[g.initial] + "__init");
        g.add_edge(w, g.initial, {max_colour(in, 0), max_colour(in, 1)});
        g.initial = w;
    }
    Arena out;
    out.dim = 2;
    out.owner = g.owner;
    out.names = g.names;
    out.initial = g.initial;
    for (int e = 0; e < g.num_edges(); ++e) {
        const int s = g.src[e], d = g.dst[e];
        std::vector<int> c = g.colour_of(e);
        if (g.owner[s] != g.owner[d]) {
            out.add_edge(s, d, c);
            continue;
        }
        int x = out.add_vertex(opponent(g.owner[s]), g.names[s] + "__" + std::to_string(e));
        out.add_edge(s, x, c);
        out.add_edge(x, d, c);
    }
    out.check();
    return out;
}

bool solve_implication(const Arena& g) {
    require_dim2(g);
    MullerCondition cond = implication_condition(0, std::max(1, max_colour(g, 0)), 0, std::max(1, max_colour(g, 1)));
    ZielonkaTree tree = build_tree(cond);
    return solve_muller(g, cond, tree).eve_wins(g.initial, 0);
}

SimInstance implication_to_sim(const Arena& g_in, bool pad_choices) {
    SimInstance si;
    si.game = make_bipartite(g_in);
    if (pad_choices) {
        Arena& pg = si.game;
        auto outs = pg.out_edges();
        for (int v = 0; v < pg.num_vertices(); ++v)
            if (pg.owner[v] == Player::Eve && outs[v].size() == 1) pg.add_edge(v, pg.dst[outs[v][0]], pg.colour_of(outs[v][0]));
    }
    const Arena& g = si.game;
    const int n = g.num_vertices();
    const int d = std::max(max_colour(g, 0), max_colour(g, 1));
    std::vector<std::string> alphabet;
    for (int e = 0; e < g.num_edges(); ++e) alphabet.push_back("e" + std::to_string(e));
    alphabet.push_back("$");
    const int dollar = g.num_edges();
    auto outs = g.out_edges();
    auto eve = [&](int v) { return g.owner[v] == Player::Eve; };

    // D: u_D for Adam vertices, v_$ and v_D for Eve vertices.
    ParityAutomaton& D = si.d;
    D.alphabet = alphabet;
    std::vector<int> dstate(n, -1), dollar_state(n, -1);
    for (int v = 0; v < n; ++v) {
        if (eve(v)) dollar_state[v] = D.add_state(g.vertex_name(v) + "_$");
        dstate[v] = D.add_state(g.vertex_name(v) + "_D");
    }
    D.initial = dstate[g.initial];
    for (int e = 0; e < g.num_edges(); ++e) {
        const int s = g.src[e], t = g.dst[e];
        if (eve(s)) D.trans.push_back({dstate[s], e, c1(g, e), dstate[t]});
        else D.trans.push_back({dstate[s], e, c1(g, e), dollar_state[t]});
    }
    for (int v = 0; v < n; ++v)
        if (eve(v)) D.trans.push_back({dollar_state[v], dollar, d, dstate[v]});
    D.finalize();

    // H: a copy of D, plus u_H, v_H and (v_H, f).
    ParityAutomaton& H = si.h;
    H.alphabet = alphabet;
    H.states = D.states;
    H.trans = D.trans;
    std::vector<int> hstate(n, -1), choice(g.num_edges(), -1);
    for (int v = 0; v < n; ++v) hstate[v] = H.add_state(g.vertex_name(v) + "_H");
    for (int f = 0; f < g.num_edges(); ++f)
        if (eve(g.src[f])) choice[f] = H.add_state("(" + g.vertex_name(g.src[f]) + "_H," + alphabet[f] + ")");
    H.initial = hstate[g.initial];
    for (int e = 0; e < g.num_edges(); ++e)
        if (!eve(g.src[e])) H.trans.push_back({hstate[g.src[e]], e, c2(g, e), hstate[g.dst[e]]});
    for (int f = 0; f < g.num_edges(); ++f) {
        const int v = g.src[f];
        if (!eve(v)) continue;
        H.trans.push_back({hstate[v], dollar, d, choice[f]});
        for (int f2 : outs[v]) {
            if (f2 == f) H.trans.push_back({choice[f], f, c2(g, f), hstate[g.dst[f]]});
            else H.trans.push_back({choice[f], f2, c2(g, f2), dstate[g.dst[f2]]});
        }
    }
    H.finalize();
    si.d = validate_and_complete(D, CompleteMode::AddRejectingSink);
    si.h = validate_and_complete(H, CompleteMode::AddRejectingSink);
    return si;
}

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    int declared = -1;
    std::vector<int> cur;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok == "c" || tok[0] == 'c' || tok[0] == '%') continue;
        auto bad = [&](const std::string& m) { throw Error("dimacs line " + std::to_string(lineno) + ": " + m); };
        if (tok == "p") {
            std::string kind;
            if (header || !(ls >> kind >> f.vars >> declared) || kind != "cnf") bad("expected 'p cnf <vars> <terms>'");
            if (f.vars < 0 || declared < 0) bad("negative counts");
            header = true;
            continue;
        }
        if (!header) bad("missing header");
        std::istringstream all(line);
        for (std::string t; all >> t;) {
            int lit = 0;
            try {
                std::size_t pos = 0;
                lit = std::stoi(t, &pos);
                if (pos != t.size()) bad("bad literal '" + t + "'");
            } catch (const std::logic_error&) {
                bad("bad literal '" + t + "'");
            }
            if (lit == 0) {
                if (cur.empty()) bad("empty term");
                f.terms.push_back(cur);
                cur.clear();
                continue;
            }
            if (std::abs(lit) > f.vars) bad("literal exceeds variable count");
            if (std::find(cur.begin(), cur.end(), lit) == cur.end()) cur.push_back(lit);
        }
    }
    if (!header) throw Error("dimacs: missing header");
    if (!cur.empty()) f.terms.push_back(cur);
    if (declared != static_cast<int>(f.terms.size()))
        throw Error("dimacs: header declares " + std::to_string(declared) + " terms, found " +
                    std::to_string(f.terms.size()));
    return f;
}

std::string serialize_dimacs(const CnfFormula& f) {
    std::ostringstream os;
    os << "p cnf " << f.vars << " " << f.terms.size() << "\n";
    for (auto& t : f.terms) {
        for (int l : t) os << l << " ";
        os << "0\n";
    }
    return os.str();
}

ImplicationGame sat_to_good_implication(const CnfFormula& f) {
    if (f.vars < 1) throw Error("formula needs at least one variable");
    if (f.terms.empty()) throw Error("formula needs at least one term");
    for (auto& t : f.terms) {
        if (t.empty()) throw Error("empty term");
        for (int l : t)
            if (l == 0 || std::abs(l) > f.vars) throw Error("literal out of range");
    }
    const int m = f.vars;
    ImplicationGame ig;
    Arena& g = ig.arena;
    g.dim = 2;
    // Literal x_j at 2(j-1), its negation at 2(j-1)+1; terms after.
    auto lit_vertex = [](int l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; };
    for (int j = 1; j <= m; ++j) {
        g.add_vertex(Player::Adam, "x" + std::to_string(j));
        g.add_vertex(Player::Adam, "nx" + std::to_string(j));
    }
    const int t0 = 2 * m;
    for (std::size_t i = 0; i < f.terms.size(); ++i) g.add_vertex(Player::Eve, "t" + std::to_string(i + 1));
    g.initial = 0;
    for (int l = 0; l < 2 * m; ++l)
        for (std::size_t i = 0; i < f.terms.size(); ++i) g.add_edge(l, t0 + static_cast<int>(i), {2 * m, 2 * m});
    for (std::size_t i = 0; i < f.terms.size(); ++i) {
        std::set<int> seen;
        for (int l : f.terms[i]) {
            if (!seen.insert(l).second) continue;
            const int j = std::abs(l);
            std::vector<int> c = l > 0 ? std::vector<int>{2 * j - 2, 2 * j} : std::vector<int>{2 * j - 1, 2 * j - 1};
            g.add_edge(t0 + static_cast<int>(i), lit_vertex(l), c);
        }
    }
    g.check();
    ig.good = check_good(g);
    return ig;
}

bool ChainReport::agree() const {
    return std::all_of(verdict.begin(), verdict.end(), [&](bool v) { return v == verdict[0]; });
}

ChainReport crosscheck_chain(const ImplicationGame& g) {
    require_dim2(g.arena);
    if (!check_good(g.arena)) throw Error("the implication game is not good");
    SimInstance si = implication_to_sim(g.arena);
    auto game = std::async(std::launch::async, [&] { return solve_implication(g.arena); });
    auto sim = std::async(std::launch::async, [&] { return eve_wins_sim(si.h, si.d); });
    auto hd = std::async(std::launch::async, [&] { return check_hd(si.h).hd; });
    auto g1 = std::async(std::launch::async, [&] { return eve_wins_gk(si.h, 1); });
    auto g2 = std::async(std::launch::async, [&] { return eve_wins_g2_by_rules(si.h); });
    ChainReport r;
    r.verdict = {game.get(), sim.get(), hd.get(), g1.get(), g2.get()};
    return r;
}

}  // namespace hdtk
