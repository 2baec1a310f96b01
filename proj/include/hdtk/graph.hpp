#pragma once

#include <cstdint>
#include <vector>

namespace hdtk {

// Plain edge list over vertices 0..n-1.
struct Digraph {
    int n = 0;
    std::vector<int> src, dst;

    explicit Digraph(int n_ = 0) : n(n_) {}
    int add_edge(int s, int d) {
        src.push_back(s);
        dst.push_back(d);
        return static_cast<int>(src.size()) - 1;
    }
    int num_edges() const { return static_cast<int>(src.size()); }
};

// Strongly connected components; comp[v] in 0..count-1, in reverse topological order
// (a component only has edges into components with a smaller or equal id).
struct SccResult {
    std::vector<int> comp;
    int count = 0;
};

// Only edges with mask[e] != 0 are used (empty mask means all edges).
SccResult strongly_connected(const Digraph& g, const std::vector<char>& edge_mask = {});

// Vertices reachable from the given roots, following masked edges.
std::vector<char> reachable_from(const Digraph& g, const std::vector<int>& roots,
                                 const std::vector<char>& edge_mask = {});

// True iff some cycle reachable from the roots has an even minimal edge weight.
// Weights are nonnegative. An odd variant asks for an odd minimum.
bool has_cycle_with_min_parity(const Digraph& g, const std::vector<int>& weight,
                               const std::vector<int>& roots, int parity);

}  // namespace hdtk
