#pragma once

#include <utility>

namespace hdtk::testing {

template <class F>
void for_each_small_game(int n, int prios, F&& f) {
    // Per-vertex choices: owner, and one or two distinct (target, priority) edges.
    std::vector<std::vector<std::pair<int, int>>> edge_sets;
    const int m = n * prios;
    for (int a = 0; a < m; ++a) edge_sets.push_back({{a / prios, a % prios}});
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) edge_sets.push_back({{a / prios, a % prios}, {b / prios, b % prios}});
    const int per = 2 * static_cast<int>(edge_sets.size());
    std::vector<int> pick(n, 0);
    while (true) {
        ParityGame g;
        for (int v = 0; v < n; ++v) g.add_vertex(pick[v] % 2 ? Player::Adam : Player::Eve);
        for (int v = 0; v < n; ++v)
            for (auto [t, p] : edge_sets[pick[v] / 2]) g.add_edge(v, t, p);
        f(static_cast<const ParityGame&>(g));
        int i = n - 1;
        while (i >= 0 && pick[i] == per - 1) pick[i--] = 0;
        if (i < 0) return;
        ++pick[i];
    }
}

}  // namespace hdtk::testing
