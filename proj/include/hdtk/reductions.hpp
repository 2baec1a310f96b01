#pragma once

#include <array>
#include <string>
#include <vector>

#include "hdtk/automaton.hpp"
#include "hdtk/game.hpp"

namespace hdtk {

// Arena with colours (pi1, pi2); Eve wins a play iff pi1-parity implies pi2-parity.
struct ImplicationGame {
    Arena arena;
    bool good = false;  // filled by check_good
};

ImplicationGame parse_igame(const std::string& text);
std::string serialize_igame(const ImplicationGame& g);

// Exists a strongly connected set of masked edges, reachable from the initial vertex, whose
// minimal first colour has parity p1 and minimal second colour has parity p2.
bool exists_cycle_with_minima(const Arena& g, const std::vector<char>& edge_mask, int p1, int p2);

// Every play satisfying pi2 also satisfies pi1 (exact).
bool check_good(const Arena& g);

// Adam-owned initial vertex and strictly alternating owners; intermediary vertices are
// named <src>__<edge index>.
Arena make_bipartite(const Arena& g);

bool solve_implication(const Arena& g);

struct SimInstance {
    Arena game;  // preprocessed arena the automata are built from
    ParityAutomaton d, h;
};

// D is deterministic; H simulates D iff Eve wins the game. With pad_choices, Eve vertices
// with a single edge get a parallel copy of it, so that every Eve choice has an escape
// into the copy of D and L(H) contains L(D).
SimInstance implication_to_sim(const Arena& g, bool pad_choices = true);

struct CnfFormula {
    int vars = 0;
    std::vector<std::vector<int>> terms;  // literals +j / -j
};

CnfFormula parse_dimacs(const std::string& text);
std::string serialize_dimacs(const CnfFormula& f);

// Literals are Adam vertices, terms Eve vertices; Eve wins iff the formula is satisfiable.
ImplicationGame sat_to_good_implication(const CnfFormula& f);

struct ChainReport {
    static constexpr std::array<const char*, 5> kNames{"game", "simulation", "hd", "g1", "g2"};
    std::array<bool, 5> verdict{};
    bool agree() const;
};

// Five verdicts from separate module paths; throws if the game is not good.
ChainReport crosscheck_chain(const ImplicationGame& g);

}  // namespace hdtk
