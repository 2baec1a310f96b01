#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hdtk/automaton.hpp"
#include "hdtk/game.hpp"
#include "hdtk/reductions.hpp"

namespace hdtk::testing {

std::string source_path(const std::string& rel);
ParityAutomaton fixture(const std::string& name);  // tests/fixtures/<name>.tpa

// ---------------------------------------------------------------------------
// Parity games

// Positional strategy enumeration: Eve wins from v iff some Eve strategy beats every Adam strategy.
std::vector<char> brute_force_regions(const ParityGame& g);

// Minimax count of priority-1 edges before the first priority-0 edge, Adam maximising,
// over plays of bounded length. Exact for games Eve wins from everywhere.
std::vector<int> brute_force_ranks(const ParityGame& g);

ParityGame random_game(std::mt19937_64& rng, int n, int max_out, int max_prio);

// Eve's winning region as a game of its own (Adam cannot leave it; Eve's exits are dropped).
ParityGame restrict_to_eve_region(const ParityGame& g);

// Every arena with n vertices, out-degree 1 or 2 (distinct edges) and priorities below `prios`.
template <class F>
void for_each_small_game(int n, int prios, F&& f);

// ---------------------------------------------------------------------------
// Automata

struct DetPair {
    ParityAutomaton a;  // nondeterministic automaton
    ParityAutomaton d;  // deterministic automaton with the same language
};

// Deterministic base plus duplicated transitions; d is the base.
DetPair hd_sample(std::uint64_t seed, int states, int lo, int hi, int letters = 2);

// Fresh initial state guessing on the first letter between two pairs; d is the product
// of the deterministic automata under the disjunction of their conditions.
DetPair union_sample(const DetPair& x, const DetPair& y);

// Deterministic product accepting L(d1) ∪ L(d2).
ParityAutomaton union_of_deterministic(const ParityAutomaton& d1, const ParityAutomaton& d2);

// First lasso on which the automata differ, over all lassos with the given bounds.
bool lasso_equivalent(const ParityAutomaton& a, const ParityAutomaton& b, int max_prefix, int max_cycle,
                      LassoWord* mismatch = nullptr);

// The fixture with up to two random transitions added and possibly one removed.
ParityAutomaton perturbed_fixture(const std::string& name, std::uint64_t seed);

// Random complete automaton, no index normalisation beyond [lo, hi].
ParityAutomaton random_nd(std::uint64_t seed, int states, int lo, int hi, int letters = 2, double density = 0.5);

// ---------------------------------------------------------------------------
// SAT and implication games

bool brute_force_sat(const CnfFormula& f);

// All formulas with max_vars variables and 1..max_terms distinct, non-tautological terms.
// With orbits set, one representative per class under renaming and negating variables.
std::vector<CnfFormula> enumerate_cnfs(int vars, int max_terms, bool orbits);

CnfFormula random_cnf(std::mt19937_64& rng, int vars, int terms);

// Eve is positional in implication games: enumerate her strategies and look for an Adam cycle.
bool brute_force_implication(const Arena& g);

Arena random_implication_arena(std::mt19937_64& rng, int n, int max_prio);

}  // namespace hdtk::testing

#include "support_impl.hpp"
