#pragma once

#include <array>
#include <map>
#include <vector>

#include "hdtk/automaton.hpp"
#include "hdtk/game.hpp"
#include "hdtk/zielonka.hpp"

namespace hdtk {

enum class TokenKind { Sim, Gk, Joker };

// What an arena vertex stands for.
struct TokenVertex {
    enum Kind : std::uint8_t {
        Round,      // Adam picks a letter
        EveTurn,    // Eve picks a transition on `letter` from eve_state
        AdamTurn,   // Adam moves his tokens (after Eve's transition `trans`)
        SimAdam,    // simulation: Adam picks his transition on `letter`
        SimEve      // simulation: Eve answers Adam's transition `trans`
    } kind = Round;
    int q = 0;                   // Eve's state
    std::array<int, 3> p{};      // Adam's states
    int letter = -1;
    int trans = -1;
};

struct TokenGame {
    TokenKind kind = TokenKind::Gk;
    int k = 1;
    ParityAutomaton eve;               // completed (and shifted for Joker)
    std::vector<ParityAutomaton> adam; // completed
    Arena arena;
    MullerCondition cond;
    ZielonkaTree tree;
    std::vector<TokenVertex> info;
    std::map<std::vector<int>, int> rounds;  // (q, p1..pk) -> Round vertex
    std::vector<int> roots;                  // Round vertices of the start tuples

    int round_vertex(const std::vector<int>& tuple) const;  // -1 if absent
};

inline constexpr int kDefaultTokenCap = 3;

// Eve in `eve`, Adam's tokens in `adam[i]`; starts are tuples (q, p1..pk).
TokenGame build_gk(const ParityAutomaton& eve, const std::vector<ParityAutomaton>& adam,
                   const std::vector<std::vector<int>>& starts, int cap = kDefaultTokenCap);
// k tokens on a single automaton.
TokenGame build_gk(const ParityAutomaton& a, int k, const std::vector<std::vector<int>>& starts,
                   int cap = kDefaultTokenCap);
TokenGame build_g1(const ParityAutomaton& eve, const ParityAutomaton& adam, const std::vector<std::vector<int>>& starts);
// Eve moves in `eve` and simulates Adam's run in `adam`; colours (Adam, Eve).
TokenGame build_sim(const ParityAutomaton& eve, const ParityAutomaton& adam, const std::vector<std::vector<int>>& starts);
// Colours (Adam, Eve); Joker moves have Adam colour 1.
TokenGame build_joker(const ParityAutomaton& a, const std::vector<std::vector<int>>& starts);
// G1(A; delay(A, k)) from the two initial states.
TokenGame build_lookahead(const ParityAutomaton& a, int k);

struct TokenSolution {
    MullerSolution ms;
    bool eve_wins_vertex(int v) const { return ms.eve_wins(v, 0); }
};

TokenSolution solve_token_game(const TokenGame& g);
bool eve_wins_from(const TokenGame& g, const TokenSolution& s, const std::vector<int>& tuple);

// One-shot helpers from the initial configuration (all tokens at initial states).
bool eve_wins_gk(const ParityAutomaton& a, int k);
bool eve_wins_g1(const ParityAutomaton& eve, const ParityAutomaton& adam);
bool eve_wins_sim(const ParityAutomaton& eve, const ParityAutomaton& adam);  // eve simulates adam
bool eve_wins_joker(const ParityAutomaton& a);
// G2 solved through the rule-built tree of the 2-token condition instead of the generic builder.
bool eve_wins_g2_by_rules(const ParityAutomaton& a);
bool eve_wins_lookahead(const ParityAutomaton& a, int k);

// Explicit [0,2] parity game of G1 for Büchi automata over the given start pairs (q, p).
struct G1BuchiGame {
    ParityGame game;
    std::map<std::pair<int, int>, int> v1;  // (q, p) -> vertex
    std::vector<TokenVertex> info;
};
G1BuchiGame build_g1_buchi(const ParityAutomaton& a, const std::vector<std::pair<int, int>>& starts);
// All weakly coreachable pairs as starts.
G1BuchiGame build_g1_buchi(const ParityAutomaton& a);

// Explicit parity game of G2 over all WCR triples and all branches of the 2-token tree on [0, hi].
struct G2ExplicitGame {
    ParityGame game;
    ParityAutomaton aut;  // completed input
    TwoTokenCondition cond;
    std::map<std::array<int, 4>, int> v1;  // (q, p1, p2, branch) -> vertex
    std::vector<TokenVertex> info;
    std::vector<int> branch_of;  // per vertex
};
G2ExplicitGame build_g2_explicit(const ParityAutomaton& a);

struct EverywhereResult {
    bool all = true;
    std::map<std::vector<int>, bool> verdict;  // WCR tuple -> Eve wins
};
// k = 1 or 2 tokens, over all tuples of weakly coreachable states.
EverywhereResult wins_everywhere(const ParityAutomaton& a, int k);

enum class ExtractMode { TheoremI, Joker };
// Subautomaton of the (completed) input keeping the transitions Eve uses.
ParityAutomaton extract_subautomaton(const ParityAutomaton& a, ExtractMode mode);

}  // namespace hdtk
