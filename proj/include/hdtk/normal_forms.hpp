#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hdtk/automaton.hpp"
#include "hdtk/game.hpp"
#include "hdtk/token_games.hpp"

namespace hdtk {

enum class Coverage { Safe, Reach, OneSafeDouble, ZeroReachDouble };

const char* coverage_name(Coverage c);
Coverage parse_coverage(const std::string& s);

// Per reachable state q, the lowest weakly coreachable p winning the designated game:
//   Safe            G1(p; q)    in the safety approximation
//   Reach           G1(q; p)    in the reachability approximation
//   OneSafeDouble   G2(p; q, q) in the automaton above priority 1
//   ZeroReachDouble G2(q; p, p) in the automaton above priority 0
struct CoverageResult {
    bool ok = true;
    int failing = -1;          // first reachable state without a partner
    std::vector<int> witness;  // per state of the completed input, -1 if none or unreachable
    std::vector<std::string> states;
};

// Throws on an index that does not fit the kind.
CoverageResult coverage_check(const ParityAutomaton& a, Coverage kind);

struct StateClass {
    int opt = -1;       // -1 for unreachable states
    bool right = false;
    std::array<int, 3> witness{-1, -1, -1};  // (p1, p2, branch) with rank 0, when opt = 0
};

struct StateClassification {
    ParityAutomaton aut;  // completed input the entries refer to
    std::vector<StateClass> states;
    std::vector<char> right_branch;  // per branch of the 2-token tree
    // Right states have their witness pair winning G2 in the automaton above priority 0.
    bool right_witnesses_win = true;
    int right_witness_failure = -1;

    bool all_opt_zero() const;
    bool all_right() const;
};

// Throws when Eve does not win the 2-token game from everywhere.
StateClassification classify_states(const ParityAutomaton& a);

struct NormalStep {
    int iteration = 0;
    int rank_rounds = 0;
    int removed_by_rank = 0, relabelled_by_rank = 0;
    int removed_by_separation = 0;
    int reduced = 0;
    int states_after = 0;
};

struct NormalizeOptions {
    bool paranoid = false;  // check sim-equivalence and G2-everywhere after every subprocedure
};

// Iterates rank-reduction, branch-separation and priority-reduction to a fixpoint.
ParityAutomaton normalize_even(const ParityAutomaton& a, const NormalizeOptions& opts = {},
                               std::vector<NormalStep>* trace = nullptr);

struct TransformReport {
    bool a_simulates_b = false;
    bool b_simulates_a = false;
    bool g1_everywhere = false;
    bool g2_everywhere = false;
    bool lassos_agree = true;
    int lassos = 0;
    LassoWord mismatch;

    bool sim_equivalent() const { return a_simulates_b && b_simulates_a; }
    bool ok() const { return sim_equivalent() && g1_everywhere && g2_everywhere && lassos_agree; }
};

// Properties of B as a replacement for A. Never throws on property failure.
TransformReport validate_transformation(const ParityAutomaton& a, const ParityAutomaton& b, std::uint64_t seed = 0,
                                        int samples = 50);

struct NormalFormReport {
    bool all_opt_zero = false;
    bool all_right = false;
    bool zero_reach_double = false;
    TransformReport transform;

    bool ok() const { return all_opt_zero && all_right && zero_reach_double && transform.ok(); }
};

// Post-conditions of normalize_even for input A and output B.
NormalFormReport check_normal_form(const ParityAutomaton& a, const ParityAutomaton& b, std::uint64_t seed = 0,
                                   int samples = 50);

}  // namespace hdtk
