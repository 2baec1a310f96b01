#include "hdtk/graph.hpp"

#include <algorithm>

namespace hdtk {

namespace {

struct Csr {
    std::vector<int> start, edge;
};

Csr build_csr(const Digraph& g, const std::vector<char>& mask) {
    Csr c;
    c.start.assign(g.n + 1, 0);
    for (int e = 0; e < g.num_edges(); ++e)
        if (mask.empty() || mask[e]) ++c.start[g.src[e] + 1];
    for (int v = 0; v < g.n; ++v) c.start[v + 1] += c.start[v];
    c.edge.resize(c.start[g.n]);
    std::vector<int> fill(c.start.begin(), c.start.end() - 1);
    for (int e = 0; e < g.num_edges(); ++e)
        if (mask.empty() || mask[e]) c.edge[fill[g.src[e]]++] = e;
    return c;
}

}  // namespace

SccResult strongly_connected(const Digraph& g, const std::vector<char>& mask) {
    Csr c = build_csr(g, mask);
    SccResult r;
    r.comp.assign(g.n, -1);
    std::vector<int> index(g.n, -1), low(g.n, 0), stack;
    std::vector<char> on_stack(g.n, 0);
    std::vector<std::pair<int, int>> call;  // (vertex, next edge slot)
    int counter = 0;
    for (int root = 0; root < g.n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, c.start[root]});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, slot] = call.back();
            if (slot < c.start[v + 1]) {
                int w = g.dst[c.edge[slot++]];
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, c.start[w]});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    r.comp[w] = r.count;
                    if (w == v) break;
                }
                ++r.count;
            }
            int done = v;
            call.pop_back();
            if (!call.empty()) {
                int parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }
    return r;
}

std::vector<char> reachable_from(const Digraph& g, const std::vector<int>& roots,
                                 const std::vector<char>& mask) {
    Csr c = build_csr(g, mask);
    std::vector<char> seen(g.n, 0);
    std::vector<int> work;
    for (int r : roots)
        if (!seen[r]) {
            seen[r] = 1;
            work.push_back(r);
        }
    while (!work.empty()) {
        int v = work.back();
        work.pop_back();
        for (int s = c.start[v]; s < c.start[v + 1]; ++s) {
            int w = g.dst[c.edge[s]];
            if (!seen[w]) {
                seen[w] = 1;
                work.push_back(w);
            }
        }
    }
    return seen;
}

bool has_cycle_with_min_parity(const Digraph& g, const std::vector<int>& weight,
                               const std::vector<int>& roots, int parity) {
    std::vector<char> reach = reachable_from(g, roots);
    int maxw = 0;
    for (int e = 0; e < g.num_edges(); ++e)
        if (reach[g.src[e]]) maxw = std::max(maxw, weight[e]);
    std::vector<char> mask(g.num_edges());
    for (int m = parity; m <= maxw; m += 2) {
        bool any = false;
        for (int e = 0; e < g.num_edges(); ++e) {
            mask[e] = reach[g.src[e]] && weight[e] >= m;
            any = any || (mask[e] && weight[e] == m);
        }
        if (!any) continue;
        SccResult scc = strongly_connected(g, mask);
        for (int e = 0; e < g.num_edges(); ++e)
            if (mask[e] && weight[e] == m && scc.comp[g.src[e]] == scc.comp[g.dst[e]]) return true;
    }
    return false;
}

}  // namespace hdtk
