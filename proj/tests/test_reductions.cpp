#include <gtest/gtest.h>

#include <random>

#include "hdtk/hd.hpp"
#include "hdtk/reductions.hpp"
#include "hdtk/token_games.hpp"
#include "support.hpp"

using namespace hdtk;
using namespace hdtk::testing;

namespace {

const char* kSmall =
    "vertex 0 Eve\nvertex 1 Adam\nvertex 2 Eve\n"
    "edge 0 1 0,1\nedge 0 2 1,1\nedge 1 0 2,2\nedge 1 2 1,0\nedge 2 2 0,0\ninitial 0\n";

// Good iff no reachable strongly connected edge set has odd first minimum and even second minimum.
bool brute_force_good(const Arena& g) {
    const int m = g.num_edges();
    std::vector<char> reach(g.num_vertices(), 0);
    std::vector<int> work{g.initial};
    reach[g.initial] = 1;
    auto outs = g.out_edges();
    while (!work.empty()) {
        int v = work.back();
        work.pop_back();
        for (int e : outs[v])
            if (!reach[g.dst[e]]) reach[g.dst[e]] = 1, work.push_back(g.dst[e]);
    }
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        int m1 = 1 << 20, m2 = 1 << 20, v0 = -1;
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) {
                m1 = std::min(m1, g.colour_of(e)[0]);
                m2 = std::min(m2, g.colour_of(e)[1]);
                v0 = g.src[e];
            }
        if (m1 % 2 == 0 || m2 % 2 == 1 || !reach[v0]) continue;
        // Strongly connected: every vertex touched reaches every other inside the mask.
        std::vector<char> touched(g.num_vertices(), 0);
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) touched[g.src[e]] = touched[g.dst[e]] = 1;
        bool scc = true;
        for (int s = 0; s < g.num_vertices() && scc; ++s) {
            if (!touched[s]) continue;
            std::vector<char> seen(g.num_vertices(), 0);
            std::vector<int> st{s};
            seen[s] = 1;
            while (!st.empty()) {
                int v = st.back();
                st.pop_back();
                for (int e = 0; e < m; ++e)
                    if ((mask >> e & 1) && g.src[e] == v && !seen[g.dst[e]]) seen[g.dst[e]] = 1, st.push_back(g.dst[e]);
            }
            for (int t = 0; t < g.num_vertices(); ++t) scc = scc && (!touched[t] || seen[t]);
        }
        if (scc) return false;
    }
    return true;
}

}  // namespace

TEST(Reductions, IgameRoundTrip) {
    ImplicationGame g = parse_igame(kSmall);
    EXPECT_EQ(g.arena.dim, 2);
    EXPECT_EQ(g.arena.num_vertices(), 3);
    ImplicationGame h = parse_igame(serialize_igame(g));
    EXPECT_EQ(h.arena.dump(), g.arena.dump());
    EXPECT_THROW(parse_igame("vertex 0 Eve\nedge 0 0 1\n"), Error);
    EXPECT_THROW(parse_igame("vertex 0 Eve\nedge 0 1 1,1\n"), Error);
}

TEST(Reductions, GoodnessAgainstEdgeSets) {
    std::mt19937_64 rng(7);
    int good = 0, bad = 0;
    for (int it = 0; it < 400; ++it) {
        Arena g = random_implication_arena(rng, 1 + it % 4, 2 + it % 2);
        if (g.num_edges() > 14) continue;
        const bool want = brute_force_good(g);
        EXPECT_EQ(check_good(g), want) << g.dump();
        (want ? good : bad)++;
    }
    EXPECT_GT(good, 0);
    EXPECT_GT(bad, 0);
}

TEST(Reductions, SolverAgainstPositionalEnumeration) {
    std::mt19937_64 rng(8);
    for (int it = 0; it < 300; ++it) {
        Arena g = random_implication_arena(rng, 1 + it % 6, 3);
        EXPECT_EQ(solve_implication(g), brute_force_implication(g)) << g.dump();
    }
}

TEST(Reductions, BipartiteShape) {
    std::mt19937_64 rng(9);
    for (int it = 0; it < 100; ++it) {
        Arena g = random_implication_arena(rng, 1 + it % 6, 3);
        Arena b = make_bipartite(g);
        EXPECT_EQ(b.owner[b.initial], Player::Adam);
        for (int e = 0; e < b.num_edges(); ++e) EXPECT_NE(b.owner[b.src[e]], b.owner[b.dst[e]]);
        EXPECT_EQ(solve_implication(b), solve_implication(g)) << g.dump();
        EXPECT_EQ(check_good(b), check_good(g));
    }
}

TEST(Reductions, SimulationMatchesGame) {
    std::mt19937_64 rng(10);
    int checked = 0, wins = 0;
    for (int it = 0; checked < 30 && it < 5000; ++it) {
        Arena g = random_implication_arena(rng, 2 + it % 7, 2 + it % 2);
        if (!check_good(g)) continue;
        SimInstance si = implication_to_sim(g);
        EXPECT_TRUE(si.d.is_deterministic());
        const bool want = brute_force_implication(g);
        EXPECT_EQ(eve_wins_sim(si.h, si.d), want) << g.dump();
        EXPECT_EQ(check_hd(si.h).hd, want) << g.dump();
        ++checked;
        wins += want;
    }
    EXPECT_EQ(checked, 30);
    EXPECT_GT(wins, 0);
    EXPECT_LT(wins, 30);
}

TEST(Reductions, AdamEdgeSnippet) {
    Arena g = parse_igame(kSmall).arena;
    SimInstance si = implication_to_sim(g);
    const Arena& b = si.game;
    for (int e = 0; e < b.num_edges(); ++e) {
        if (b.owner[b.src[e]] != Player::Adam) continue;
        const std::string u = b.vertex_name(b.src[e]), v = b.vertex_name(b.dst[e]);
        const int letter = si.d.letter_id("e" + std::to_string(e));
        auto dt = si.d.out(si.d.state_id(u + "_D"), letter);
        ASSERT_EQ(dt.size(), 1u);
        EXPECT_EQ(si.d.trans[dt[0]].dst, si.d.state_id(v + "_$"));
        EXPECT_EQ(si.d.trans[dt[0]].prio, b.colour_of(e)[0]);
        auto ht = si.h.out(si.h.state_id(u + "_H"), letter);
        ASSERT_EQ(ht.size(), 1u);
        EXPECT_EQ(si.h.trans[ht[0]].dst, si.h.state_id(v + "_H"));
        EXPECT_EQ(si.h.trans[ht[0]].prio, b.colour_of(e)[1]);
    }
}

TEST(Reductions, UnpaddedReductionGap) {
    CnfFormula f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n");
    ImplicationGame g = sat_to_good_implication(f);
    EXPECT_FALSE(solve_implication(g.arena));
    SimInstance padded = implication_to_sim(g.arena);
    EXPECT_FALSE(eve_wins_sim(padded.h, padded.d));
    EXPECT_FALSE(check_hd(padded.h).hd);
    // Without padding H loses the words of D but stays history-deterministic.
    SimInstance raw = implication_to_sim(g.arena, false);
    EXPECT_FALSE(eve_wins_sim(raw.h, raw.d));
    EXPECT_TRUE(check_hd(raw.h).hd);
}

TEST(Reductions, SatToGameUnits) {
    ImplicationGame sat = sat_to_good_implication(parse_dimacs("p cnf 1 1\n1 0\n"));
    EXPECT_TRUE(sat.good);
    EXPECT_TRUE(solve_implication(sat.arena));
    ImplicationGame unsat = sat_to_good_implication(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"));
    EXPECT_TRUE(unsat.good);
    EXPECT_FALSE(solve_implication(unsat.arena));
}

TEST(Reductions, AllSmallCnfs) {
    int sat = 0;
    auto all = enumerate_cnfs(2, 2, false);
    auto three = enumerate_cnfs(3, 2, true);
    all.insert(all.end(), three.begin(), three.end());
    for (const CnfFormula& f : all) {
        ImplicationGame g = sat_to_good_implication(f);
        ASSERT_TRUE(check_good(g.arena)) << serialize_dimacs(f);
        const bool want = brute_force_sat(f);
        EXPECT_EQ(solve_implication(g.arena), want) << serialize_dimacs(f);
        sat += want;
    }
    EXPECT_GT(sat, 0);
    EXPECT_LT(sat, static_cast<int>(all.size()));
}

TEST(Reductions, ChainOnSmallCnfs) {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 6; ++it) {
        CnfFormula f = random_cnf(rng, 1 + it % 2, 1 + it % 3);
        ChainReport r = crosscheck_chain(sat_to_good_implication(f));
        EXPECT_TRUE(r.agree()) << serialize_dimacs(f);
        EXPECT_EQ(r.verdict[0], brute_force_sat(f)) << serialize_dimacs(f);
    }
}

TEST(Reductions, ChainRequiresGoodGame) {
    ImplicationGame g;
    g.arena.dim = 2;
    g.arena.add_vertex(Player::Eve);
    g.arena.add_edge(0, 0, {1, 0});
    EXPECT_FALSE(check_good(g.arena));
    EXPECT_THROW(crosscheck_chain(g), Error);
}

TEST(Reductions, DimacsErrors) {
    EXPECT_THROW(parse_dimacs("1 2 0\n"), Error);
    EXPECT_THROW(parse_dimacs("p cnf 1 1\n2 0\n"), Error);
    EXPECT_THROW(parse_dimacs("p dnf 1 1\n1 0\n"), Error);
    CnfFormula f = parse_dimacs("c comment\np cnf 2 2\n1 -2 0\n2 0\n");
    EXPECT_EQ(f.vars, 2);
    EXPECT_EQ(f.terms.size(), 2u);
    EXPECT_EQ(parse_dimacs(serialize_dimacs(f)).terms, f.terms);
}
