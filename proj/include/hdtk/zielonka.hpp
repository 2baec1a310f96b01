#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hdtk {

// Fixed-size bitset over colour indices.
class ColourSet {
public:
    ColourSet() = default;
    explicit ColourSet(int n) : n_(n), w_((n + 63) / 64, 0) {}

    int universe() const { return n_; }
    bool test(int c) const { return (w_[c >> 6] >> (c & 63)) & 1u; }
    void set(int c) { w_[c >> 6] |= std::uint64_t{1} << (c & 63); }
    void reset(int c) { w_[c >> 6] &= ~(std::uint64_t{1} << (c & 63)); }
    int count() const;
    bool empty() const;
    bool subset_of(const ColourSet& o) const;
    std::vector<int> elements() const;
    bool operator==(const ColourSet& o) const { return n_ == o.n_ && w_ == o.w_; }
    // Lexicographic comparison of the sorted element lists.
    bool lex_less(const ColourSet& o) const;

private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

// Muller condition over colour tuples; component i ranges over [lo[i], hi[i]].
// Colours are encoded in mixed radix with component 0 most significant.
struct MullerCondition {
    std::vector<int> lo, hi;
    // Either a rule on the componentwise minima of a set (min-based condition) ...
    std::function<bool(const std::vector<int>&)> min_rule;
    // ... or an explicit family of accepting sets.
    std::vector<ColourSet> family;

    int dims() const { return static_cast<int>(lo.size()); }
    int num_colours() const;
    std::vector<int> decode(int c) const;
    int encode(const std::vector<int>& tuple) const;
    bool min_based() const { return static_cast<bool>(min_rule); }
    bool accepts(const ColourSet& s) const;
    std::string colour_name(int c) const;
};

MullerCondition min_condition(std::vector<int> lo, std::vector<int> hi,
                              std::function<bool(const std::vector<int>&)> rule);
// Single-component condition over the given colour values, accepting the listed sets.
MullerCondition explicit_condition(int lo, int hi, const std::vector<std::vector<int>>& accepting_sets);

struct ZNode {
    ColourSet label;
    int parent = -1;
    std::vector<int> children;
    int depth = 0;
    bool accepting = false;
    std::vector<int> corner;  // lower corner of the label (min-based conditions)
};

class ZielonkaTree {
public:
    std::vector<ZNode> nodes;  // node 0 is the root
    int iota = 0;              // 0 iff the root label is accepting
    int colours = 0;
    std::vector<int> leaves;      // leaf node ids, left to right; branch index = position here
    std::vector<int> leaf_index;  // node -> branch index, or -1

    int pdepth(int node) const { return nodes[node].depth + iota; }
    int height() const;
    int num_branches() const { return static_cast<int>(leaves.size()); }
    int max_priority() const { return height() + iota; }
    std::vector<int> branch_nodes(int branch) const;
    int distinct_labels() const;

    // Deterministic parity transducer step: (priority, next branch).
    std::pair<int, int> step(int branch, int colour) const {
        std::size_t k = static_cast<std::size_t>(branch) * colours + colour;
        return {step_prio_[k], step_next_[k]};
    }
    int support(int branch, int colour) const;

    void index();  // computes leaves, depths and the step table; called by builders

    std::string dump(const MullerCondition& cond) const;

private:
    std::vector<int> step_prio_, step_next_;
    int leftmost_leaf(int node) const;
};

ZielonkaTree build_tree(const MullerCondition& cond);

struct TwoTokenCondition {
    MullerCondition cond;
    ZielonkaTree tree;       // built by the rule-based construction
    int dag_nodes = 0;       // distinct labels
};

// Colours [0,d]^3: (Eve, Adam 1, Adam 2).
MullerCondition two_token_condition(int d);
TwoTokenCondition build_2token_condition(int d);
// Rule-based construction only, without checks.
ZielonkaTree build_2token_tree_by_rules(int d, const MullerCondition& cond);

// Colours [lo1,hi1] x [lo2,hi2]; accepting iff min of the first is even implies min of the second is even.
MullerCondition implication_condition(int lo1, int hi1, int lo2, int hi2);
// Colours [0,d1] x [i2, i2+d2].
std::pair<MullerCondition, ZielonkaTree> build_implication_condition(int d1, int d2, int i2);

// Colours: component 0 = Eve in [lo[0],hi[0]], the rest Adam tokens; accepting iff
// some Adam component has even minimum implies Eve's minimum is even.
MullerCondition token_condition(const std::vector<int>& lo, const std::vector<int>& hi);

// Checks the alternation and maximality conditions on every node; returns an error text or "".
std::string check_tree_invariants(const ZielonkaTree& t, const MullerCondition& cond);

}  // namespace hdtk
