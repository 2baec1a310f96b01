#pragma once

#include <string>
#include <vector>

#include "hdtk/automaton.hpp"
#include "hdtk/game.hpp"
#include "hdtk/token_games.hpp"

namespace hdtk {

// Outcome of the 2-token check, with the winner's strategy in the product parity game.
struct HdVerdict {
    bool hd = false;
    Player winner = Player::Adam;
    TokenGame game;
    TokenSolution solution;
    bool certificate_ok = false;  // the winner's strategy passed verify_strategy

    // Product parity game plus `strategy <vertex> <edge>` lines for the winner.
    std::string certificate() const;
};

HdVerdict check_hd(const ParityAutomaton& a);

// Re-checks a certificate produced by HdVerdict::certificate().
bool verify_certificate(const std::string& text);

// Sim(A, D) against a language-equivalent deterministic automaton. Throws when D is not
// deterministic or the equivalence preflight fails (exact for A ⊆ D, sampled for D ⊆ A).
bool hd_oracle_vs_det(const ParityAutomaton& a, const ParityAutomaton& d, std::uint64_t seed = 0,
                      int samples = 300);

// L(A) ⊆ L(H) for history-deterministic H: A is turned into a Büchi automaton and H must
// simulate it. Throws if H is not HD unless assume_hd is set.
bool inclusion_hd(const ParityAutomaton& a, const ParityAutomaton& h, bool assume_hd = false);

// Exact L(A) ⊆ L(D) for deterministic D; fills the counterexample when given.
bool inclusion_oracle_det(const ParityAutomaton& a, const ParityAutomaton& d, LassoWord* counterexample = nullptr);

struct SdEntry {
    int state = 0;
    int letter = 0;
    std::vector<int> successors;
    bool witnessed = false;  // all successor pairs win G1 against each other both ways
};

// Sufficient check for semantic determinism; a false entry means "unknown".
std::vector<SdEntry> sd_witness(const ParityAutomaton& a);

}  // namespace hdtk
