#include "hdtk/game.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <sstream>

#include "hdtk/automaton.hpp"
#include "hdtk/graph.hpp"

namespace hdtk {

int Arena::add_vertex(Player p, std::string name) {
    owner.push_back(p);
    if (!name.empty() || !names.empty()) {
        names.resize(owner.size() - 1);
        names.push_back(std::move(name));
    }
    return num_vertices() - 1;
}

int Arena::add_edge(int s, int d, const std::vector<int>& c, bool is_neutral) {
    if (static_cast<int>(c.size()) != dim) throw Error("edge colour has wrong dimension");
    src.push_back(s);
    dst.push_back(d);
    colour.insert(colour.end(), c.begin(), c.end());
    if (is_neutral || !neutral.empty()) {
        neutral.resize(src.size() - 1, 0);
        neutral.push_back(is_neutral ? 1 : 0);
    }
    return num_edges() - 1;
}

std::vector<int> Arena::colour_of(int e) const {
    auto b = colour.begin() + static_cast<std::ptrdiff_t>(e) * dim;
    return {b, b + dim};
}

void Arena::check() const {
    const int n = num_vertices();
    if (n == 0) throw Error("empty arena");
    if (initial < 0 || initial >= n) throw Error("initial vertex out of range");
    std::vector<char> has_out(n, 0);
    for (int e = 0; e < num_edges(); ++e) {
        if (src[e] < 0 || src[e] >= n || dst[e] < 0 || dst[e] >= n) throw Error("edge endpoint out of range");
        has_out[src[e]] = 1;
    }
    for (int v = 0; v < n; ++v)
        if (!has_out[v]) throw Error("dead-end vertex " + vertex_name(v));
    if (static_cast<int>(colour.size()) != num_edges() * dim) throw Error("colour data size mismatch");
}

std::string Arena::vertex_name(int v) const {
    if (v < static_cast<int>(names.size()) && !names[v].empty()) return names[v];
    return std::to_string(v);
}

std::string Arena::dump() const {
    std::ostringstream os;
    for (int v = 0; v < num_vertices(); ++v) os << "vertex " << vertex_name(v) << " " << player_name(owner[v]) << "\n";
    for (int e = 0; e < num_edges(); ++e) {
        os << "edge " << vertex_name(src[e]) << " " << vertex_name(dst[e]) << " ";
        for (int i = 0; i < dim; ++i) os << (i ? "," : "") << colour[static_cast<std::size_t>(e) * dim + i];
        os << "\n";
    }
    os << "initial " << vertex_name(initial) << "\n";
    return os.str();
}

std::vector<std::vector<int>> Arena::out_edges() const {
    std::vector<std::vector<int>> out(num_vertices());
    for (int e = 0; e < num_edges(); ++e) out[src[e]].push_back(e);
    return out;
}

Arena parse_arena(const std::string& text) {
    Arena g;
    g.dim = -1;
    std::map<std::string, int> id;
    std::istringstream in(text);
    std::string line, init;
    int lineno = 0;
    struct RawEdge {
        std::string s, d;
        std::vector<int> c;
        int line;
    };
    std::vector<RawEdge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto bad = [&](const std::string& m) { throw Error("line " + std::to_string(lineno) + ": " + m); };
        if (tok[0] == "vertex") {
            if (tok.size() != 3) bad("vertex takes <id> <Eve|Adam>");
            if (id.count(tok[1])) bad("duplicate vertex '" + tok[1] + "'");
            Player p;
            if (tok[2] == "Eve") p = Player::Eve;
            else if (tok[2] == "Adam") p = Player::Adam;
            else bad("owner must be Eve or Adam");
            id[tok[1]] = g.add_vertex(p, tok[1]);
        } else if (tok[0] == "edge") {
            if (tok.size() != 4) bad("edge takes <src> <dst> <c1>[,<c2>...]");
            RawEdge r{tok[1], tok[2], {}, lineno};
            std::stringstream cs(tok[3]);
            for (std::string part; std::getline(cs, part, ',');) {
                if (part.empty() || !std::all_of(part.begin(), part.end(), ::isdigit)) bad("colour must be nonnegative integers");
                r.c.push_back(std::stoi(part));
            }
            if (g.dim < 0) g.dim = static_cast<int>(r.c.size());
            if (static_cast<int>(r.c.size()) != g.dim) bad("inconsistent colour dimension");
            edges.push_back(std::move(r));
        } else if (tok[0] == "initial") {
            if (tok.size() != 2) bad("initial takes <id>");
            init = tok[1];
        } else {
            bad("unknown line '" + tok[0] + "'");
        }
    }
    if (g.dim < 0) g.dim = 1;
    for (auto& r : edges) {
        if (!id.count(r.s) || !id.count(r.d))
            throw Error("line " + std::to_string(r.line) + ": unknown vertex");
        g.add_edge(id[r.s], id[r.d], r.c);
    }
    if (!init.empty()) {
        if (!id.count(init)) throw Error("unknown initial vertex '" + init + "'");
        g.initial = id[init];
    }
    g.check();
    return g;
}

std::vector<char> Solution::region(Player p) const {
    std::vector<char> r(eve_wins.size());
    for (std::size_t v = 0; v < r.size(); ++v) r[v] = (eve_wins[v] != 0) == (p == Player::Eve);
    return r;
}

// ---------------------------------------------------------------------------
// Solver

namespace {

// Vertex-priority game obtained by subdividing every edge whose priority is below
// the maximum; original vertices carry the maximum priority.
class Zielonka {
public:
    explicit Zielonka(const ParityGame& g) : g_(g) {
        const int n = g.num_vertices();
        int maxp = 0;
        for (int e = 0; e < g.num_edges(); ++e) maxp = std::max(maxp, g.prio(e));
        own_.assign(g.owner.begin(), g.owner.end());
        pr_.assign(n, maxp);
        std::vector<std::pair<int, int>> edges;  // (src, dst) in the split game
        for (int e = 0; e < g.num_edges(); ++e) {
            if (g.prio(e) < maxp) {
                int m = static_cast<int>(own_.size());
                own_.push_back(Player::Eve);
                pr_.push_back(g.prio(e));
                edges.push_back({g.src[e], m});
                origin_.push_back(e);
                edges.push_back({m, g.dst[e]});
                origin_.push_back(-1);
            } else {
                edges.push_back({g.src[e], g.dst[e]});
                origin_.push_back(e);
            }
        }
        N_ = static_cast<int>(own_.size());
        // CSR by source, preserving edge order.
        ostart_.assign(N_ + 1, 0);
        istart_.assign(N_ + 1, 0);
        for (auto [s, d] : edges) {
            ++ostart_[s + 1];
            ++istart_[d + 1];
        }
        for (int v = 0; v < N_; ++v) {
            ostart_[v + 1] += ostart_[v];
            istart_[v + 1] += istart_[v];
        }
        odst_.resize(edges.size());
        oorig_.resize(edges.size());
        isrc_.resize(edges.size());
        std::vector<int> fo(ostart_.begin(), ostart_.end() - 1), fi(istart_.begin(), istart_.end() - 1);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            auto [s, d] = edges[i];
            odst_[fo[s]] = d;
            oorig_[fo[s]++] = origin_[i];
            isrc_[fi[d]++] = s;
        }
        win_.assign(N_, 0);
        strat_.assign(N_, -1);
        level_.assign(N_, 0);
        mark_.assign(N_, 0);
        cnt_stamp_.assign(N_, 0);
        cnt_.assign(N_, 0);
    }

    Solution run() {
        std::vector<int> all(N_);
        for (int v = 0; v < N_; ++v) all[v] = v;
        solve(0, std::move(all));
        Solution s;
        const int n = g_.num_vertices();
        s.eve_wins.resize(n);
        s.strategy.assign(n, -1);
        for (int v = 0; v < n; ++v) {
            s.eve_wins[v] = win_[v] == 0;
            const int w = win_[v];
            if (w == static_cast<int>(own_[v]) && strat_[v] >= 0) s.strategy[v] = oorig_[strat_[v]];
        }
        return s;
    }

private:
    const ParityGame& g_;
    int N_ = 0;
    std::vector<Player> own_;
    std::vector<int> pr_, origin_;
    std::vector<int> ostart_, odst_, oorig_, istart_, isrc_;
    std::vector<int> win_, strat_, level_;
    std::vector<unsigned> mark_, cnt_stamp_;
    std::vector<int> cnt_;
    unsigned stamp_ = 0;

    bool in_sub(int v, int d) const { return level_[v] >= d; }

    int first_edge_into_mark(int v, int d) const {
        for (int i = ostart_[v]; i < ostart_[v + 1]; ++i)
            if (in_sub(odst_[i], d) && mark_[odst_[i]] == stamp_) return i;
        return -1;
    }

    // Attractor for `pl` inside the level-d subgame; leaves mark_ == stamp_ on its members.
    std::vector<int> attract(int d, const std::vector<int>& target, int pl) {
        ++stamp_;
        std::vector<int> set = target;
        for (int v : target) mark_[v] = stamp_;
        for (std::size_t h = 0; h < set.size(); ++h) {
            int w = set[h];
            for (int i = istart_[w]; i < istart_[w + 1]; ++i) {
                int u = isrc_[i];
                if (!in_sub(u, d) || mark_[u] == stamp_) continue;
                if (static_cast<int>(own_[u]) == pl) {
                    strat_[u] = first_edge_into_mark(u, d);
                    mark_[u] = stamp_;
                    set.push_back(u);
                } else {
                    if (cnt_stamp_[u] != stamp_) {
                        cnt_stamp_[u] = stamp_;
                        int c = 0;
                        for (int k = ostart_[u]; k < ostart_[u + 1]; ++k) c += in_sub(odst_[k], d);
                        cnt_[u] = c;
                    }
                    if (--cnt_[u] == 0) {
                        mark_[u] = stamp_;
                        set.push_back(u);
                    }
                }
            }
        }
        return set;
    }

    void solve(int d, std::vector<int> verts) {
        while (!verts.empty()) {
            int p = pr_[verts[0]];
            for (int v : verts) p = std::min(p, pr_[v]);
            const int a = p & 1;
            std::vector<int> target;
            for (int v : verts)
                if (pr_[v] == p) target.push_back(v);
            std::vector<int> attr = attract(d, target, a);
            std::vector<int> rest;
            for (int v : verts)
                if (mark_[v] != stamp_) rest.push_back(v);
            for (int v : rest) level_[v] = d + 1;
            solve(d + 1, rest);
            for (int v : rest) level_[v] = d;
            std::vector<int> opp;
            for (int v : rest)
                if (win_[v] == 1 - a) opp.push_back(v);
            if (opp.empty()) {
                for (int v : attr) win_[v] = a;
                for (int v : target) {
                    if (static_cast<int>(own_[v]) != a) continue;
                    strat_[v] = -1;
                    for (int i = ostart_[v]; i < ostart_[v + 1]; ++i)
                        if (in_sub(odst_[i], d)) {
                            strat_[v] = i;
                            break;
                        }
                }
                return;
            }
            std::vector<int> b = attract(d, opp, 1 - a);
            for (int v : b) {
                win_[v] = 1 - a;
                level_[v] = d - 1;
            }
            std::vector<int> keep;
            keep.reserve(verts.size() - b.size());
            for (int v : verts)
                if (in_sub(v, d)) keep.push_back(v);
            verts = std::move(keep);
        }
    }
};

}  // namespace

Solution solve_parity(const ParityGame& g) {
    if (g.dim != 1) throw Error("solve_parity needs a one-dimensional arena");
    g.check();
    return Zielonka(g).run();
}

bool verify_strategy(const ParityGame& g, const std::vector<int>& strategy, Player player,
                     const std::vector<char>& region) {
    const int n = g.num_vertices();
    Digraph h(n);
    std::vector<int> w;
    std::vector<int> roots;
    auto outs = g.out_edges();
    for (int v = 0; v < n; ++v) {
        if (!region[v]) continue;
        roots.push_back(v);
        if (g.owner[v] == player) {
            int e = strategy[v];
            if (e < 0 || e >= g.num_edges() || g.src[e] != v) throw Error("strategy undefined at vertex " + g.vertex_name(v));
            if (!region[g.dst[e]]) throw Error("strategy leaves the claimed region at " + g.vertex_name(v));
            h.add_edge(v, g.dst[e]);
            w.push_back(g.prio(e));
        } else {
            for (int e : outs[v]) {
                if (!region[g.dst[e]]) return false;
                h.add_edge(v, g.dst[e]);
                w.push_back(g.prio(e));
            }
        }
    }
    const int bad = player == Player::Eve ? 1 : 0;
    return !has_cycle_with_min_parity(h, w, roots, bad);
}

RankTable compute_ranks(const ParityGame& g) {
    Solution base = solve_parity(g);
    for (int v = 0; v < g.num_vertices(); ++v)
        if (!base.eve_wins[v]) throw Error("ranks need Eve to win from every vertex (lost at " + g.vertex_name(v) + ")");
    const int n = g.num_vertices();
    RankTable rt;
    rt.rank.assign(n, -1);
    rt.strategy.assign(n, -1);
    std::vector<char> prev(n, 0);
    int assigned = 0;
    for (int j = 0; assigned < n; ++j) {
        if (j > n) throw Error("rank exceeds the vertex count");
        // Level j: a 0-edge wins, a 1-edge wins iff it lands in the level j-1 region.
        ParityGame h;
        h.owner = g.owner;
        const int win = h.add_vertex(Player::Eve), lose = h.add_vertex(Player::Eve);
        for (int e = 0; e < g.num_edges(); ++e) {
            int p = g.prio(e);
            if (p == 0) h.add_edge(g.src[e], win, 0);
            else if (p == 1) h.add_edge(g.src[e], prev[g.dst[e]] ? win : lose, 1);
            else h.add_edge(g.src[e], g.dst[e], p);
        }
        h.add_edge(win, win, 0);
        h.add_edge(lose, lose, 1);
        Solution s = solve_parity(h);
        std::vector<char> cur(n, 0);
        for (int v = 0; v < n; ++v) {
            cur[v] = s.eve_wins[v];
            if (prev[v] && !cur[v]) throw Error("internal: rank levels not monotone");
            if (cur[v] && rt.rank[v] < 0) {
                rt.rank[v] = j;
                ++assigned;
                if (g.owner[v] == Player::Eve) rt.strategy[v] = s.strategy[v];
            }
        }
        prev = std::move(cur);
    }
    auto outs = g.out_edges();
    for (int v = 0; v < n; ++v) {
        if (g.owner[v] != Player::Eve) continue;
        for (int e : outs[v])
            if (g.prio(e) == 0) {
                rt.strategy[v] = e;
                break;
            }
    }
    return rt;
}

// ---------------------------------------------------------------------------
// Muller product

MullerProduct muller_to_parity(const Arena& g, const MullerCondition& cond, const ZielonkaTree& tree,
                               const std::vector<int>& roots, int initial_branch) {
    if (g.dim != cond.dims()) throw Error("arena colour dimension does not match the condition");
    const int nb = tree.num_branches();
    if (initial_branch < 0 || initial_branch >= nb) throw Error("initial branch out of range");
    MullerProduct mp;
    mp.branches = nb;
    ParityGame& p = mp.game;
    p.dim = 1;
    // Neutral padding priority: above all tree priorities, parity from the padding colour alone.
    int pad = tree.max_priority() + 1;
    std::vector<int> code(g.num_edges(), -1);
    bool pad_set = false;
    for (int e = 0; e < g.num_edges(); ++e) {
        code[e] = cond.encode(g.colour_of(e));
        if (g.is_neutral(e) && !pad_set) {
            ColourSet s(cond.num_colours());
            s.set(code[e]);
            const int want = cond.accepts(s) ? 0 : 1;
            if (pad % 2 != want) pad = tree.max_priority() + 2;
            pad_set = true;
        }
    }
    auto outs = g.out_edges();
    std::vector<int> work;
    auto get = [&](int v, int b) {
        auto [it, fresh] = mp.index.try_emplace(static_cast<std::int64_t>(v) * nb + b, -1);
        if (fresh) {
            it->second = p.add_vertex(g.owner[v]);
            mp.arena_vertex.push_back(v);
            mp.branch_of.push_back(b);
            work.push_back(it->second);
        }
        return it->second;
    };
    p.initial = get(g.initial, initial_branch);
    if (roots.empty()) {
        for (int v = 0; v < g.num_vertices(); ++v) get(v, initial_branch);
    } else {
        for (int v : roots) {
            if (v < 0 || v >= g.num_vertices()) throw Error("root vertex out of range");
            get(v, initial_branch);
        }
    }
    while (!work.empty()) {
        const int pv = work.back();
        work.pop_back();
        const int v = mp.arena_vertex[pv], b = mp.branch_of[pv];
        for (int e : outs[v]) {
            int prio, b2;
            if (g.is_neutral(e)) {
                prio = pad;
                b2 = b;
            } else {
                std::tie(prio, b2) = tree.step(b, code[e]);
            }
            const int to = get(g.dst[e], b2);
            p.add_edge(pv, to, prio);
            mp.edge_origin.push_back(e);
        }
    }
    return mp;
}

int MullerProduct::vertex(int v, int branch) const {
    auto it = index.find(static_cast<std::int64_t>(v) * branches + branch);
    return it == index.end() ? -1 : it->second;
}

bool MullerSolution::eve_wins(int v, int branch) const {
    const int x = product.vertex(v, branch);
    if (x < 0) throw Error("vertex outside the explored product");
    return sol.eve_wins[x] != 0;
}

MullerSolution solve_muller(const Arena& g, const MullerCondition& cond, const ZielonkaTree& tree,
                            const std::vector<int>& roots) {
    MullerSolution ms;
    ms.product = muller_to_parity(g, cond, tree, roots);
    ms.sol = solve_parity(ms.product.game);
    return ms;
}

}  // namespace hdtk
