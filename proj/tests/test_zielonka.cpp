#include <gtest/gtest.h>

#include <random>

#include "hdtk/zielonka.hpp"
#include "support.hpp"

using namespace hdtk;

namespace {

// Minimal priority seen infinitely often by the transducer on u v^ω.
int transducer_inf_min(const ZielonkaTree& t, const std::vector<int>& u, const std::vector<int>& v) {
    int b = 0;
    for (int c : u) b = t.step(b, c).second;
    std::vector<int> starts, mins;
    while (std::find(starts.begin(), starts.end(), b) == starts.end()) {
        starts.push_back(b);
        int m = 1 << 20;
        for (int c : v) {
            auto [p, nb] = t.step(b, c);
            m = std::min(m, p);
            b = nb;
        }
        mins.push_back(m);
    }
    auto it = std::find(starts.begin(), starts.end(), b);
    return *std::min_element(mins.begin() + (it - starts.begin()), mins.end());
}

void check_transducer(const MullerCondition& cond, const ZielonkaTree& t, int max_len) {
    const int n = cond.num_colours();
    for_each_lasso(n, max_len, max_len, [&](const LassoWord& w) {
        ColourSet inf(n);
        for (int c : w.cycle) inf.set(c);
        ASSERT_EQ(transducer_inf_min(t, w.prefix, w.cycle) % 2 == 0, cond.accepts(inf));
    });
}

}  // namespace

TEST(Zielonka, SingleAcceptingColour) {
    MullerCondition c = explicit_condition(0, 0, {{0}});
    ZielonkaTree t = build_tree(c);
    EXPECT_EQ(t.nodes.size(), 1u);
    EXPECT_EQ(t.pdepth(0), 0);
    EXPECT_EQ(t.num_branches(), 1);
    EXPECT_EQ(t.step(0, 0), std::make_pair(0, 0));
}

TEST(Zielonka, BuchiTree) {
    MullerCondition c = explicit_condition(0, 1, {{0}, {0, 1}});
    ZielonkaTree t = build_tree(c);
    ASSERT_EQ(t.nodes.size(), 2u);
    EXPECT_EQ(t.iota, 0);
    EXPECT_EQ(t.nodes[1].label.elements(), std::vector<int>{c.encode({1})});
    EXPECT_EQ(t.height(), 1);
    EXPECT_EQ(t.num_branches(), 1);
    EXPECT_EQ(t.step(0, c.encode({0})).first, 0);
    EXPECT_EQ(t.step(0, c.encode({1})).first, 1);
}

TEST(Zielonka, FourColourExample) {
    MullerCondition c = explicit_condition(1, 4, {{1, 2, 3, 4}, {2, 3, 4}, {1, 2}, {2, 3}, {3, 4}, {1}, {2}});
    ZielonkaTree t = build_tree(c);
    EXPECT_EQ(t.iota, 0);
    EXPECT_EQ(t.pdepth(0), 0);
    for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) EXPECT_EQ(t.pdepth(v), t.nodes[v].depth);
    EXPECT_EQ(check_tree_invariants(t, c), "");
    check_transducer(c, t, 3);
}

TEST(Zielonka, TransducerAllSmallConditions) {
    for (int k = 1; k <= 3; ++k) {
        const int subsets = (1 << k) - 1;
        for (int fam = 0; fam < (1 << subsets); ++fam) {
            std::vector<std::vector<int>> sets;
            for (int s = 0; s < subsets; ++s)
                if (fam >> s & 1) {
                    std::vector<int> x;
                    for (int c = 0; c < k; ++c)
                        if ((s + 1) >> c & 1) x.push_back(c);
                    sets.push_back(x);
                }
            MullerCondition c = explicit_condition(0, k - 1, sets);
            ZielonkaTree t = build_tree(c);
            ASSERT_EQ(check_tree_invariants(t, c), "");
            check_transducer(c, t, 4);
        }
    }
}

TEST(Zielonka, TransducerMinConditions) {
    auto imp = implication_condition(0, 1, 0, 1);
    check_transducer(imp, build_tree(imp), 4);
    auto dis = min_condition({0, 1}, {1, 2}, [](const std::vector<int>& m) { return m[0] % 2 == 0 || m[1] % 2 == 0; });
    check_transducer(dis, build_tree(dis), 4);
}

TEST(Zielonka, RandomConditionsInvariants) {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 200; ++it) {
        const int k = 2 + it % 5;
        std::vector<std::vector<int>> sets;
        for (int s = 1; s < (1 << k); ++s)
            if (rng() % 3 == 0) {
                std::vector<int> x;
                for (int c = 0; c < k; ++c)
                    if (s >> c & 1) x.push_back(c);
                sets.push_back(x);
            }
        MullerCondition c = explicit_condition(0, k - 1, sets);
        ZielonkaTree t = build_tree(c);
        ASSERT_EQ(check_tree_invariants(t, c), "");
        for (int b = 0; b < t.num_branches(); ++b) {
            auto path = t.branch_nodes(b);
            for (std::size_t i = 1; i < path.size(); ++i) {
                EXPECT_EQ(t.nodes[path[i]].parent, path[i - 1]);
                EXPECT_NE(t.nodes[path[i]].accepting, t.nodes[path[i - 1]].accepting);
            }
            EXPECT_TRUE(t.nodes[path.back()].children.empty());
            for (int col = 0; col < t.colours; ++col) {
                auto [p, nb] = t.step(b, col);
                EXPECT_GE(p, 0);
                EXPECT_TRUE(nb >= 0 && nb < t.num_branches());
            }
        }
    }
}

TEST(Zielonka, TwoTokenRulesMatchGeneric) {
    for (int d = 0; d <= 3; ++d) {
        TwoTokenCondition r = build_2token_condition(d);
        ZielonkaTree g = build_tree(r.cond);
        EXPECT_EQ(r.tree.dump(r.cond), g.dump(r.cond)) << d;
        EXPECT_EQ(r.tree.nodes[0].label.count(), (d + 1) * (d + 1) * (d + 1));
        EXPECT_LE(r.dag_nodes, (d + 1) * (d + 1) * (d + 1));
        EXPECT_LE(r.tree.height(), 3 * (d + 1));
        EXPECT_LE(r.tree.num_branches(), 1 << (3 * (d + 1)));
        EXPECT_EQ(check_tree_invariants(r.tree, r.cond), "");
    }
    TwoTokenCondition r2 = build_2token_condition(2);
    EXPECT_LE(r2.tree.num_branches(), 512);
    EXPECT_LE(r2.tree.distinct_labels(), 27);
    EXPECT_LE(r2.tree.height(), 9);
}

TEST(Zielonka, ImplicationTreeShapes) {
    auto [c01, y01] = build_implication_condition(1, 1, 0);
    EXPECT_EQ(y01.num_branches(), 1);
    auto [c12, y12] = build_implication_condition(1, 1, 1);
    EXPECT_EQ(y12.num_branches(), 2);
    for (int d = 1; d <= 6; ++d) {
        auto [c, y] = build_implication_condition(1, d, 1);
        EXPECT_EQ(y.iota, 1);
        EXPECT_EQ(y.nodes[0].children.size(), 2u);
        EXPECT_EQ(check_tree_invariants(y, c), "");
    }
}

TEST(Zielonka, ImplicationTreeCounts) {
    for (int i2 = 0; i2 <= 1; ++i2)
        for (int d = 1; d <= 6; ++d) {
            auto [c, y] = build_implication_condition(1, d, i2);
            const int leaves = i2 == 1 ? 1 + (d + 1) / 2 : 1 + d / 2;
            EXPECT_EQ(y.num_branches(), leaves) << i2 << " " << d;
            // Hand count: the chain ends in the all-odd corner, one level deeper when i2 + d is odd.
            EXPECT_EQ(y.height(), (i2 + d) % 2 == 0 ? d : d + 1) << i2 << " " << d;
        }
}

TEST(Zielonka, ImplicationTreeByHand) {
    // [0,1] x [0,1]: root accepting, then {(0,1),(1,1)} rejecting, then {(1,1)} accepting.
    auto [c, y] = build_implication_condition(1, 1, 0);
    ASSERT_EQ(y.nodes.size(), 3u);
    EXPECT_EQ(y.nodes[1].label.count(), 2);
    EXPECT_TRUE(y.nodes[1].label.test(c.encode({0, 1})));
    EXPECT_TRUE(y.nodes[1].label.test(c.encode({1, 1})));
    EXPECT_EQ(y.nodes[2].label.elements(), std::vector<int>{c.encode({1, 1})});
}
