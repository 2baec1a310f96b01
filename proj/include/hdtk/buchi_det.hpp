#pragma once

#include <string>
#include <vector>

#include "hdtk/automaton.hpp"
#include "hdtk/game.hpp"
#include "hdtk/token_games.hpp"

namespace hdtk {

// Optimal ranks of the states of a Büchi automaton in its explicit 1-token game.
struct OptRanks {
    ParityAutomaton aut;     // completed and trimmed automaton the ranks refer to
    G1BuchiGame game;
    RankTable ranks;
    std::vector<int> opt;      // per state of aut
    std::vector<int> partner;  // a WCR partner attaining opt
};

// Throws when Eve does not win the 1-token game from everywhere.
OptRanks buchi_opt_ranks(const ParityAutomaton& a);

struct RankStep {
    std::vector<std::string> states;  // names, aligned with opt
    std::vector<int> opt;
    std::vector<Transition> removed, relabelled;  // in the automaton of that step
};

// Repeats rank computation, removal and relabelling until nothing changes.
ParityAutomaton rank_reduce_buchi(const ParityAutomaton& a, std::vector<RankStep>* trace = nullptr);

struct ReachCovering {
    bool ok = true;
    int failing = -1;          // first state without a partner
    std::vector<int> witness;  // per state, -1 if none or unreachable
};

// For each reachable q, the lowest p weakly coreachable with q such that Eve wins G1(q; p)
// in the reachability approximation.
ReachCovering reach_covering_witness(const ParityAutomaton& a);

// States p with Eve winning G1(p; p) in the reachability approximation (indices of a).
std::vector<char> reach_deterministic_states(const ParityAutomaton& a);

struct Pruning {
    ParityAutomaton det;         // same states as the input; one transition per letter on `good` states
    std::vector<char> good;      // states with Eve winning G1(p; p)
};

// Deterministic pruning of a safety or reachability automaton. L(det, p) = L(s, p) on good states.
// Throws if a requested state is not good.
Pruning prune_det(const ParityAutomaton& s, const std::vector<int>& required = {});

// Quadratic construction for automata with reach-covering on which Eve wins G1 everywhere.
ParityAutomaton det_from_reach_covering(const ParityAutomaton& a);

struct DetTrace {
    int input_states = 0;
    int extracted_transitions = 0;
    std::vector<RankStep> steps;
    int output_states = 0;
};

// Full pipeline; throws if the input is not a history-deterministic Büchi automaton.
ParityAutomaton determinize_hd_buchi(const ParityAutomaton& a, DetTrace* trace = nullptr);

}  // namespace hdtk
