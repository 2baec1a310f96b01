#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdtk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Transition {
    int src = 0;
    int letter = 0;
    int prio = 0;
    int dst = 0;
    bool operator==(const Transition&) const = default;
};

// Transition-based parity automaton, min-even acceptance.
class ParityAutomaton {
public:
    std::vector<std::string> alphabet;
    std::vector<std::string> states;
    int initial = 0;
    std::vector<Transition> trans;
    int lo = 0, hi = 0;  // recomputed by finalize()

    // Rebuilds the successor index and the priority range. Call after editing trans.
    void finalize();

    int num_states() const { return static_cast<int>(states.size()); }
    int num_letters() const { return static_cast<int>(alphabet.size()); }
    int num_trans() const { return static_cast<int>(trans.size()); }

    // Indices into trans of the transitions leaving q on letter a, in stored order.
    std::span<const int> out(int q, int a) const {
        std::size_t k = static_cast<std::size_t>(q) * alphabet.size() + a;
        return {index_.data() + start_[k], index_.data() + start_[k + 1]};
    }

    bool is_complete() const;
    bool is_deterministic() const;
    bool has_priority(int p) const;

    int state_id(std::string_view name) const;   // -1 if absent
    int letter_id(std::string_view name) const;  // -1 if absent
    int add_state(std::string name);              // uniquified by suffixing '_'

    bool operator==(const ParityAutomaton& o) const {
        return alphabet == o.alphabet && states == o.states && initial == o.initial && trans == o.trans;
    }

private:
    std::vector<int> start_, index_;
};

struct LassoWord {
    std::vector<int> prefix;
    std::vector<int> cycle;
};

ParityAutomaton parse_tpa(std::string_view text);
std::string serialize_tpa(const ParityAutomaton& a);
ParityAutomaton load_tpa(const std::string& path);
void save_tpa(const ParityAutomaton& a, const std::string& path);

// Parses letters separated by whitespace or commas, e.g. "a b" or "a,b".
LassoWord parse_lasso(const ParityAutomaton& a, std::string_view prefix, std::string_view cycle);

enum class CompleteMode { Reject, AddRejectingSink };

inline constexpr const char* kAccSink = "__acc_sink";
inline constexpr const char* kRejSink = "__rej_sink";

// Odd priority used for rejecting sinks of an automaton with range [lo,hi].
int rejecting_priority(int lo, int hi);

ParityAutomaton validate_and_complete(const ParityAutomaton& a, CompleteMode mode);

enum class Approx { Above0, Above1, Safe, Reach };
ParityAutomaton approximate(const ParityAutomaton& a, Approx kind);

struct WcrPartition {
    int n = 0;
    std::vector<char> cr;          // n*n, cr[p*n+q]
    std::vector<int> cls;          // class of each state, -1 if unreachable
    std::vector<std::vector<int>> classes;

    bool coreachable(int p, int q) const { return cr[static_cast<std::size_t>(p) * n + q] != 0; }
    bool weakly(int p, int q) const { return cls[p] >= 0 && cls[p] == cls[q]; }
};

WcrPartition weak_coreachability(const ParityAutomaton& a);

// States with a nonempty language.
std::vector<char> nonempty_states(const ParityAutomaton& a);

ParityAutomaton delay(const ParityAutomaton& a, int k);
ParityAutomaton parity_to_buchi(const ParityAutomaton& a);
bool lasso_member(const ParityAutomaton& a, const LassoWord& w, int from_state = -1);
ParityAutomaton two_priority_reduce(const ParityAutomaton& a);

// Same automaton with a different initial state.
ParityAutomaton with_initial(const ParityAutomaton& a, int q);
// Subautomaton keeping transitions with keep[i] != 0.
ParityAutomaton sub_automaton(const ParityAutomaton& a, const std::vector<char>& keep);
// Every priority increased by delta.
ParityAutomaton shift_priorities(const ParityAutomaton& a, int delta);
// States reachable from the initial state.
std::vector<char> reachable_states(const ParityAutomaton& a);
// Drops states outside `keep` (and their transitions), renumbering the rest in order.
ParityAutomaton restrict_states(const ParityAutomaton& a, const std::vector<char>& keep);
// Only the reachable part.
ParityAutomaton trim(const ParityAutomaton& a);

// L(a, from p) ⊆ L(d, from q) for deterministic complete d. Optional counterexample.
bool included_in_deterministic(const ParityAutomaton& a, const ParityAutomaton& d,
                               LassoWord* counterexample = nullptr);

struct RandomParams {
    int states = 4;
    int letters = 2;
    int lo = 0, hi = 1;
    double density = 0.5;           // chance of each extra transition per (state, letter)
    double determinism_bias = 0.0;  // chance a (state, letter) keeps a single transition
    bool hd_by_construction = false;
    int extra = -1;                 // hd mode: number of duplicated transitions (-1 = about states)
};

ParityAutomaton random_automaton(std::uint64_t seed, const RandomParams& params);

// Random deterministic complete automaton; its language is unchanged by hd-mode duplication.
ParityAutomaton random_deterministic(std::uint64_t seed, const RandomParams& params);

LassoWord random_lasso(std::uint64_t seed, int letters, int max_prefix, int max_cycle);

// All lassos with 0 <= |u| <= max_prefix and 1 <= |v| <= max_cycle over `letters` letters.
// Cycles that are proper powers or rotations-equivalent are not filtered.
template <class F>
void for_each_lasso(int letters, int max_prefix, int max_cycle, F&& f);

}  // namespace hdtk

#include "hdtk/detail/lasso_enum.hpp"
