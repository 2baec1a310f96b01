#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hdtk/zielonka.hpp"

namespace hdtk {

enum class Player : std::uint8_t { Eve = 0, Adam = 1 };

inline Player opponent(Player p) { return p == Player::Eve ? Player::Adam : Player::Eve; }
inline const char* player_name(Player p) { return p == Player::Eve ? "Eve" : "Adam"; }

// Game arena with integer tuple colours on edges. A parity game has dim == 1.
class Arena {
public:
    int dim = 1;
    int initial = 0;
    std::vector<Player> owner;
    std::vector<std::string> names;  // optional; empty or one per vertex
    std::vector<int> src, dst;
    std::vector<int> colour;         // num_edges() * dim
    std::vector<char> neutral;       // per edge; padding edges that never decide a play

    int num_vertices() const { return static_cast<int>(owner.size()); }
    int num_edges() const { return static_cast<int>(src.size()); }
    int add_vertex(Player p, std::string name = {});
    int add_edge(int s, int d, const std::vector<int>& c, bool is_neutral = false);
    int add_edge(int s, int d, int prio) { return add_edge(s, d, std::vector<int>{prio}); }
    int prio(int e) const { return colour[static_cast<std::size_t>(e) * dim]; }
    std::vector<int> colour_of(int e) const;
    bool is_neutral(int e) const { return !neutral.empty() && neutral[e]; }

    // Throws on dead ends or malformed data.
    void check() const;
    // `vertex <id> <Eve|Adam>` / `edge <src> <dst> <c1>[,<c2>...]` lines, plus `initial <id>`.
    std::string dump() const;
    std::string vertex_name(int v) const;

    // Outgoing edges of every vertex, in index order.
    std::vector<std::vector<int>> out_edges() const;
};

using ParityGame = Arena;

Arena parse_arena(const std::string& text);

struct Solution {
    std::vector<char> eve_wins;  // per vertex
    std::vector<int> strategy;   // per vertex: chosen edge for its owner when the owner wins there, else -1

    bool winner_is_eve(int v) const { return eve_wins[v] != 0; }
    std::vector<char> region(Player p) const;
};

// Recursive attractor decomposition. Edge ties broken by lowest edge index.
Solution solve_parity(const ParityGame& g);

// True iff the strategy of `player` wins from every vertex of `region`.
// Throws if the strategy leaves the region or is undefined on an owned vertex.
bool verify_strategy(const ParityGame& g, const std::vector<int>& strategy, Player player,
                     const std::vector<char>& region);

struct RankTable {
    std::vector<int> rank;
    std::vector<int> strategy;  // Eve's optimal positional strategy (edge per Eve vertex)
};

// Ranks for games that Eve wins from every vertex; throws otherwise.
RankTable compute_ranks(const ParityGame& g);

struct MullerProduct {
    ParityGame game;
    int branches = 0;
    std::vector<int> edge_origin;   // product edge -> arena edge
    std::vector<int> arena_vertex;  // product vertex -> arena vertex
    std::vector<int> branch_of;     // product vertex -> branch
    std::unordered_map<std::int64_t, int> index;
    int vertex(int v, int branch) const;  // -1 if not explored
};

// Part of the product of an arena (colours in cond) with the tree's parity transducer
// reachable from the roots (all vertices when empty), each paired with initial_branch.
// Neutral edges keep the branch and get a priority above every tree priority.
MullerProduct muller_to_parity(const Arena& g, const MullerCondition& cond, const ZielonkaTree& tree,
                               const std::vector<int>& roots = {}, int initial_branch = 0);

// Solves a Muller arena via the product; eve_wins per arena vertex and branch.
struct MullerSolution {
    MullerProduct product;
    Solution sol;
    bool eve_wins(int v, int branch = 0) const;  // throws outside the explored product
};
MullerSolution solve_muller(const Arena& g, const MullerCondition& cond, const ZielonkaTree& tree,
                            const std::vector<int>& roots = {});

}  // namespace hdtk
