#include "hdtk/zielonka.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>

#include "hdtk/automaton.hpp"

namespace hdtk {

// ---------------------------------------------------------------------------
// ColourSet

int ColourSet::count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
}

bool ColourSet::empty() const {
    return std::all_of(w_.begin(), w_.end(), [](auto w) { return w == 0; });
}

bool ColourSet::subset_of(const ColourSet& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i] & ~o.w_[i]) return false;
    return true;
}

std::vector<int> ColourSet::elements() const {
    std::vector<int> out;
    for (int c = 0; c < n_; ++c)
        if (test(c)) out.push_back(c);
    return out;
}

bool ColourSet::lex_less(const ColourSet& o) const {
    auto a = elements(), b = o.elements();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------------------
// Conditions

int MullerCondition::num_colours() const {
    int n = 1;
    for (int i = 0; i < dims(); ++i) n *= hi[i] - lo[i] + 1;
    return n;
}

std::vector<int> MullerCondition::decode(int c) const {
    std::vector<int> t(dims());
    for (int i = dims() - 1; i >= 0; --i) {
        int r = hi[i] - lo[i] + 1;
        t[i] = lo[i] + c % r;
        c /= r;
    }
    return t;
}

int MullerCondition::encode(const std::vector<int>& t) const {
    int c = 0;
    for (int i = 0; i < dims(); ++i) {
        if (t[i] < lo[i] || t[i] > hi[i]) throw Error("colour component out of range");
        c = c * (hi[i] - lo[i] + 1) + (t[i] - lo[i]);
    }
    return c;
}

bool MullerCondition::accepts(const ColourSet& s) const {
    if (s.empty()) throw Error("Muller predicate evaluated on the empty set");
    if (min_based()) {
        std::vector<int> m(hi);
        for (int c : s.elements()) {
            auto t = decode(c);
            for (int i = 0; i < dims(); ++i) m[i] = std::min(m[i], t[i]);
        }
        return min_rule(m);
    }
    return std::find(family.begin(), family.end(), s) != family.end();
}

std::string MullerCondition::colour_name(int c) const {
    auto t = decode(c);
    if (t.size() == 1) return std::to_string(t[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s + ")";
}

MullerCondition min_condition(std::vector<int> lo, std::vector<int> hi,
                              std::function<bool(const std::vector<int>&)> rule) {
    MullerCondition m;
    m.lo = std::move(lo);
    m.hi = std::move(hi);
    m.min_rule = std::move(rule);
    return m;
}

MullerCondition explicit_condition(int lo, int hi, const std::vector<std::vector<int>>& sets) {
    MullerCondition m;
    m.lo = {lo};
    m.hi = {hi};
    for (auto& s : sets) {
        if (s.empty()) throw Error("accepting family contains the empty set");
        ColourSet cs(m.num_colours());
        for (int v : s) cs.set(m.encode({v}));
        if (std::find(m.family.begin(), m.family.end(), cs) == m.family.end()) m.family.push_back(cs);
    }
    return m;
}

MullerCondition two_token_condition(int d) {
    return token_condition({0, 0, 0}, {d, d, d});
}

MullerCondition token_condition(const std::vector<int>& lo, const std::vector<int>& hi) {
    return min_condition(lo, hi, [](const std::vector<int>& m) {
        bool adam = false;
        for (std::size_t i = 1; i < m.size(); ++i) adam = adam || m[i] % 2 == 0;
        return !adam || m[0] % 2 == 0;
    });
}

MullerCondition implication_condition(int lo1, int hi1, int lo2, int hi2) {
    return min_condition({lo1, lo2}, {hi1, hi2},
                         [](const std::vector<int>& m) { return m[0] % 2 != 0 || m[1] % 2 == 0; });
}

// ---------------------------------------------------------------------------
// Trees

namespace {

ColourSet cone(const MullerCondition& cond, const std::vector<int>& corner) {
    ColourSet s(cond.num_colours());
    for (int c = 0; c < cond.num_colours(); ++c) {
        auto t = cond.decode(c);
        bool in = true;
        for (int i = 0; i < cond.dims() && in; ++i) in = t[i] >= corner[i];
        if (in) s.set(c);
    }
    return s;
}

bool leq(const std::vector<int>& a, const std::vector<int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

// Minimal corners m' >= m with the opposite membership.
std::vector<std::vector<int>> flipped_corners(const MullerCondition& cond, const std::vector<int>& m, bool acc) {
    std::vector<std::vector<int>> cand;
    for (int c = 0; c < cond.num_colours(); ++c) {
        auto t = cond.decode(c);
        if (leq(m, t) && cond.min_rule(t) != acc) cand.push_back(t);
    }
    std::vector<std::vector<int>> out;
    for (auto& t : cand) {
        bool minimal = true;
        for (auto& u : cand)
            if (u != t && leq(u, t)) {
                minimal = false;
                break;
            }
        if (minimal) out.push_back(t);
    }
    return out;
}

std::vector<ColourSet> flipped_maximal_subsets(const MullerCondition& cond, const ColourSet& x, bool acc) {
    auto el = x.elements();
    const int k = static_cast<int>(el.size());
    if (k > 24) throw Error("explicit Muller condition too large for subset enumeration");
    std::vector<std::uint32_t> masks;
    for (std::uint32_t m = 1; m < (1u << k); ++m)
        if (m != (1u << k) - 1) masks.push_back(m);
    std::stable_sort(masks.begin(), masks.end(),
                     [](auto a, auto b) { return std::popcount(a) > std::popcount(b); });
    std::vector<std::uint32_t> kept;
    std::vector<ColourSet> out;
    for (auto m : masks) {
        bool covered = false;
        for (auto kmask : kept)
            if ((m & ~kmask) == 0) {
                covered = true;
                break;
            }
        if (covered) continue;
        ColourSet s(cond.num_colours());
        for (int i = 0; i < k; ++i)
            if (m >> i & 1u) s.set(el[i]);
        if (cond.accepts(s) != acc) {
            kept.push_back(m);
            out.push_back(s);
        }
    }
    return out;
}

void sort_children(ZielonkaTree& t, int node) {
    auto& ch = t.nodes[node].children;
    std::sort(ch.begin(), ch.end(), [&](int a, int b) { return t.nodes[a].label.lex_less(t.nodes[b].label); });
}

}  // namespace

ZielonkaTree build_tree(const MullerCondition& cond) {
    if (cond.num_colours() <= 0) throw Error("empty colour set");
    ZielonkaTree t;
    t.colours = cond.num_colours();
    ZNode root;
    root.label = ColourSet(t.colours);
    for (int c = 0; c < t.colours; ++c) root.label.set(c);
    if (cond.min_based()) root.corner = cond.lo;
    root.accepting = cond.accepts(root.label);
    t.nodes.push_back(root);
    for (std::size_t v = 0; v < t.nodes.size(); ++v) {
        const bool acc = t.nodes[v].accepting;
        std::vector<ZNode> kids;
        if (cond.min_based()) {
            for (auto& m : flipped_corners(cond, t.nodes[v].corner, acc)) {
                ZNode k;
                k.corner = m;
                k.label = cone(cond, m);
                k.accepting = !acc;
                kids.push_back(std::move(k));
            }
        } else {
            for (auto& s : flipped_maximal_subsets(cond, t.nodes[v].label, acc)) {
                ZNode k;
                k.label = s;
                k.accepting = !acc;
                kids.push_back(std::move(k));
            }
        }
        std::sort(kids.begin(), kids.end(), [](const ZNode& a, const ZNode& b) { return a.label.lex_less(b.label); });
        for (auto& k : kids) {
            k.parent = static_cast<int>(v);
            k.depth = t.nodes[v].depth + 1;
            t.nodes[v].children.push_back(static_cast<int>(t.nodes.size()));
            t.nodes.push_back(std::move(k));
        }
        sort_children(t, static_cast<int>(v));
    }
    t.iota = t.nodes[0].accepting ? 0 : 1;
    t.index();
    return t;
}

int ZielonkaTree::height() const {
    int h = 0;
    for (auto& n : nodes) h = std::max(h, n.depth);
    return h;
}

int ZielonkaTree::leftmost_leaf(int node) const {
    while (!nodes[node].children.empty()) node = nodes[node].children.front();
    return node;
}

std::vector<int> ZielonkaTree::branch_nodes(int branch) const {
    std::vector<int> path;
    for (int v = leaves[branch]; v >= 0; v = nodes[v].parent) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

int ZielonkaTree::distinct_labels() const {
    std::set<std::vector<int>> s;
    for (auto& n : nodes) s.insert(n.label.elements());
    return static_cast<int>(s.size());
}

int ZielonkaTree::support(int branch, int colour) const {
    int v = leaves[branch];
    while (!nodes[v].label.test(colour)) v = nodes[v].parent;
    return v;
}

void ZielonkaTree::index() {
    leaves.clear();
    leaf_index.assign(nodes.size(), -1);
    for (auto& n : nodes) n.depth = n.parent < 0 ? 0 : nodes[n.parent].depth + 1;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (nodes[v].children.empty()) {
            leaf_index[v] = static_cast<int>(leaves.size());
            leaves.push_back(v);
        }
        for (auto it = nodes[v].children.rbegin(); it != nodes[v].children.rend(); ++it) stack.push_back(*it);
    }
    const int nb = num_branches();
    step_prio_.assign(static_cast<std::size_t>(nb) * colours, 0);
    step_next_.assign(static_cast<std::size_t>(nb) * colours, 0);
    for (int b = 0; b < nb; ++b) {
        auto path = branch_nodes(b);
        for (int c = 0; c < colours; ++c) {
            int i = static_cast<int>(path.size()) - 1;
            while (!nodes[path[i]].label.test(c)) --i;
            int nu = path[i];
            std::size_t k = static_cast<std::size_t>(b) * colours + c;
            step_prio_[k] = pdepth(nu);
            if (nodes[nu].children.empty()) {
                step_next_[k] = b;
            } else {
                const auto& ch = nodes[nu].children;
                std::size_t j = std::find(ch.begin(), ch.end(), path[i + 1]) - ch.begin();
                step_next_[k] = leaf_index[leftmost_leaf(ch[(j + 1) % ch.size()])];
            }
        }
    }
}

std::string ZielonkaTree::dump(const MullerCondition& cond) const {
    std::ostringstream os;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        const ZNode& n = nodes[v];
        os << "node " << v << " depth " << n.depth << " pdepth " << pdepth(static_cast<int>(v)) << " label {";
        bool first = true;
        for (int c : n.label.elements()) {
            os << (first ? "" : ",") << cond.colour_name(c);
            first = false;
        }
        os << "} children";
        for (int c : n.children) os << " " << c;
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Rule-based construction of the 2-token tree

ZielonkaTree build_2token_tree_by_rules(int d, const MullerCondition& cond) {
    ZielonkaTree t;
    t.colours = cond.num_colours();
    ZNode root;
    root.corner = {0, 0, 0};
    root.label = cone(cond, root.corner);
    root.accepting = true;
    t.nodes.push_back(root);
    auto even = [](int x) { return x % 2 == 0; };
    for (std::size_t v = 0; v < t.nodes.size(); ++v) {
        const auto m = t.nodes[v].corner;
        const int x = m[0], y = m[1], z = m[2];
        std::vector<std::vector<int>> kids;
        if (even(x)) {  // R1
            if (x + 1 <= d) kids.push_back({x + 1, y, z});
        } else if (even(y) && even(z)) {  // R2
            if (x + 1 <= d) kids.push_back({x + 1, y, z});
            if (y + 1 <= d && z + 1 <= d) kids.push_back({x, y + 1, z + 1});
        } else if (!even(y) && !even(z)) {  // R3
            if (y + 1 <= d) kids.push_back({x, y + 1, z});
            if (z + 1 <= d) kids.push_back({x, y, z + 1});
        } else if (even(y)) {  // R4
            if (x + 1 <= d) kids.push_back({x + 1, y, z});
            if (y + 1 <= d) kids.push_back({x, y + 1, z});
        } else {  // R5
            if (x + 1 <= d) kids.push_back({x + 1, y, z});
            if (z + 1 <= d) kids.push_back({x, y, z + 1});
        }
        std::vector<ZNode> made;
        for (auto& c : kids) {
            ZNode k;
            k.corner = c;
            k.label = cone(cond, c);
            k.accepting = cond.min_rule(c);
            k.parent = static_cast<int>(v);
            made.push_back(std::move(k));
        }
        std::sort(made.begin(), made.end(), [](const ZNode& a, const ZNode& b) { return a.label.lex_less(b.label); });
        for (auto& k : made) {
            t.nodes[v].children.push_back(static_cast<int>(t.nodes.size()));
            t.nodes.push_back(std::move(k));
        }
        sort_children(t, static_cast<int>(v));
    }
    t.iota = 0;
    t.index();
    return t;
}

TwoTokenCondition build_2token_condition(int d) {
    if (d < 0) throw Error("d must be nonnegative");
    TwoTokenCondition r;
    r.cond = two_token_condition(d);
    r.tree = build_2token_tree_by_rules(d, r.cond);
    r.dag_nodes = r.tree.distinct_labels();
    return r;
}

std::pair<MullerCondition, ZielonkaTree> build_implication_condition(int d1, int d2, int i2) {
    if (d1 < 1 || d2 < 1) throw Error("implication condition needs d1, d2 >= 1");
    if (i2 != 0 && i2 != 1) throw Error("i2 must be 0 or 1");
    MullerCondition c = implication_condition(0, d1, i2, i2 + d2);
    ZielonkaTree t = build_tree(c);
    return {std::move(c), std::move(t)};
}

std::string check_tree_invariants(const ZielonkaTree& t, const MullerCondition& cond) {
    for (std::size_t v = 0; v < t.nodes.size(); ++v) {
        const ZNode& x = t.nodes[v];
        if (cond.accepts(x.label) != x.accepting) return "node " + std::to_string(v) + ": membership flag wrong";
        auto xel = x.label.elements();
        const bool exhaustive = xel.size() <= 12;
        for (int c : x.children) {
            const ZNode& y = t.nodes[c];
            if (y.accepting == x.accepting) return "node " + std::to_string(c) + ": no alternation";
            if (!y.label.subset_of(x.label) || y.label == x.label)
                return "node " + std::to_string(c) + ": label not a proper subset";
            for (int col : xel) {
                if (y.label.test(col)) continue;
                ColourSet z = y.label;
                z.set(col);
                if (cond.accepts(z) != x.accepting) return "node " + std::to_string(c) + ": not maximal";
            }
        }
        for (std::size_t i = 0; i < x.children.size(); ++i)
            for (std::size_t j = i + 1; j < x.children.size(); ++j)
                if (t.nodes[x.children[i]].label == t.nodes[x.children[j]].label)
                    return "node " + std::to_string(v) + ": duplicate children";
        if (!exhaustive) continue;
        // Every flipped subset lies below some child; no flipped subset strictly contains a child.
        const int k = static_cast<int>(xel.size());
        for (std::uint32_t m = 1; m < (1u << k); ++m) {
            ColourSet z(t.colours);
            for (int i = 0; i < k; ++i)
                if (m >> i & 1u) z.set(xel[i]);
            if (cond.accepts(z) == x.accepting) continue;
            bool below = false;
            for (int c : x.children) below = below || z.subset_of(t.nodes[c].label);
            if (!below) return "node " + std::to_string(v) + ": flipped subset not covered";
        }
    }
    return "";
}

}  // namespace hdtk
