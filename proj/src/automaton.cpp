#include "hdtk/automaton.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "hdtk/graph.hpp"

namespace hdtk {

void ParityAutomaton::finalize() {
    const int n = num_states(), m = num_letters();
    if (n == 0) throw Error("automaton has no states");
    if (initial < 0 || initial >= n) throw Error("initial state out of range");
    start_.assign(static_cast<std::size_t>(n) * m + 1, 0);
    lo = 0;
    hi = 0;
    bool first = true;
    for (const Transition& t : trans) {
        if (t.src < 0 || t.src >= n || t.dst < 0 || t.dst >= n) throw Error("transition endpoint out of range");
        if (t.letter < 0 || t.letter >= m) throw Error("transition letter out of range");
        if (t.prio < 0) throw Error("negative priority");
        ++start_[static_cast<std::size_t>(t.src) * m + t.letter + 1];
        if (first) {
            lo = hi = t.prio;
            first = false;
        } else {
            lo = std::min(lo, t.prio);
            hi = std::max(hi, t.prio);
        }
    }
    for (std::size_t k = 1; k < start_.size(); ++k) start_[k] += start_[k - 1];
    index_.resize(trans.size());
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (int i = 0; i < num_trans(); ++i) {
        const Transition& t = trans[i];
        index_[fill[static_cast<std::size_t>(t.src) * m + t.letter]++] = i;
    }
}

bool ParityAutomaton::is_complete() const {
    for (int q = 0; q < num_states(); ++q)
        for (int a = 0; a < num_letters(); ++a)
            if (out(q, a).empty()) return false;
    return true;
}

bool ParityAutomaton::is_deterministic() const {
    for (int q = 0; q < num_states(); ++q)
        for (int a = 0; a < num_letters(); ++a)
            if (out(q, a).size() > 1) return false;
    return true;
}

bool ParityAutomaton::has_priority(int p) const {
    return std::any_of(trans.begin(), trans.end(), [p](const Transition& t) { return t.prio == p; });
}

int ParityAutomaton::state_id(std::string_view name) const {
    for (int i = 0; i < num_states(); ++i)
        if (states[i] == name) return i;
    return -1;
}

int ParityAutomaton::letter_id(std::string_view name) const {
    for (int i = 0; i < num_letters(); ++i)
        if (alphabet[i] == name) return i;
    return -1;
}

int ParityAutomaton::add_state(std::string name) {
    while (state_id(name) >= 0) name += '_';
    states.push_back(std::move(name));
    return num_states() - 1;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

bool valid_letter(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

[[noreturn]] void syntax(int line, const std::string& msg) {
    throw Error("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

ParityAutomaton parse_tpa(std::string_view text) {
    ParityAutomaton a;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool magic = false, have_alpha = false, have_states = false, have_init = false;
    std::string init_name;
    struct Raw {
        std::string src, letter, prio, dst;
        int line;
    };
    std::vector<Raw> raw;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (!magic) {
            if (tok.size() != 2 || tok[0] != "HDTK-TPA" || tok[1] != "1") syntax(lineno, "expected 'HDTK-TPA 1'");
            magic = true;
            continue;
        }
        const std::string& key = tok[0];
        if (key == "alphabet:") {
            if (have_alpha) syntax(lineno, "duplicate alphabet header");
            have_alpha = true;
            for (std::size_t i = 1; i < tok.size(); ++i) {
                if (!valid_letter(tok[i])) syntax(lineno, "bad letter '" + tok[i] + "'");
                if (std::find(a.alphabet.begin(), a.alphabet.end(), tok[i]) != a.alphabet.end())
                    syntax(lineno, "duplicate letter '" + tok[i] + "'");
                a.alphabet.push_back(tok[i]);
            }
        } else if (key == "states:") {
            if (have_states) syntax(lineno, "duplicate states header");
            have_states = true;
            for (std::size_t i = 1; i < tok.size(); ++i) {
                if (std::find(a.states.begin(), a.states.end(), tok[i]) != a.states.end())
                    syntax(lineno, "duplicate state '" + tok[i] + "'");
                a.states.push_back(tok[i]);
            }
        } else if (key == "initial:") {
            if (have_init) syntax(lineno, "duplicate initial header");
            if (tok.size() != 2) syntax(lineno, "initial takes one state");
            have_init = true;
            init_name = tok[1];
        } else if (key == "trans:") {
            if (tok.size() != 5) syntax(lineno, "trans takes <src> <letter> <priority> <dst>");
            raw.push_back({tok[1], tok[2], tok[3], tok[4], lineno});
        } else {
            syntax(lineno, "unknown header '" + key + "'");
        }
    }
    if (!magic) throw Error("line 1: expected 'HDTK-TPA 1'");
    if (!have_alpha || a.alphabet.empty()) throw Error("missing or empty alphabet");
    if (!have_states || a.states.empty()) throw Error("missing or empty states");
    if (!have_init) throw Error("missing initial state");
    a.initial = a.state_id(init_name);
    if (a.initial < 0) throw Error("unknown initial state '" + init_name + "'");
    for (const Raw& r : raw) {
        Transition t;
        t.src = a.state_id(r.src);
        t.dst = a.state_id(r.dst);
        t.letter = a.letter_id(r.letter);
        if (t.src < 0) syntax(r.line, "unknown state '" + r.src + "'");
        if (t.dst < 0) syntax(r.line, "unknown state '" + r.dst + "'");
        if (t.letter < 0) syntax(r.line, "unknown letter '" + r.letter + "'");
        if (r.prio.empty() || !std::all_of(r.prio.begin(), r.prio.end(), ::isdigit) || r.prio.size() > 6)
            syntax(r.line, "priority must be a nonnegative integer");
        t.prio = std::stoi(r.prio);
        a.trans.push_back(t);
    }
    if (!a.trans.empty()) {
        int mn = std::min_element(a.trans.begin(), a.trans.end(),
                                  [](auto& x, auto& y) { return x.prio < y.prio; })->prio;
        int shift = mn >= 2 ? (mn / 2) * 2 : 0;
        for (Transition& t : a.trans) t.prio -= shift;
    }
    a.finalize();
    return a;
}

std::string serialize_tpa(const ParityAutomaton& a) {
    std::string s = "HDTK-TPA 1\nalphabet:";
    for (auto& l : a.alphabet) s += " " + l;
    s += "\nstates:";
    for (auto& q : a.states) s += " " + q;
    s += "\ninitial: " + a.states[a.initial] + "\n";
    for (const Transition& t : a.trans)
        s += "trans: " + a.states[t.src] + " " + a.alphabet[t.letter] + " " + std::to_string(t.prio) + " " +
             a.states[t.dst] + "\n";
    return s;
}

ParityAutomaton load_tpa(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_tpa(ss.str());
}

void save_tpa(const ParityAutomaton& a, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write '" + path + "'");
    f << serialize_tpa(a);
}

LassoWord parse_lasso(const ParityAutomaton& a, std::string_view prefix, std::string_view cycle) {
    auto split = [&](std::string_view s) {
        std::vector<int> out;
        std::string cur;
        auto flush = [&] {
            if (cur.empty()) return;
            int id = a.letter_id(cur);
            if (id < 0) throw Error("letter '" + cur + "' not in alphabet");
            out.push_back(id);
            cur.clear();
        };
        for (char c : s) {
            if (c == ',' || c == ' ' || c == '\t') flush();
            else cur += c;
        }
        flush();
        return out;
    };
    LassoWord w{split(prefix), split(cycle)};
    if (w.cycle.empty()) throw Error("lasso cycle must be nonempty");
    return w;
}

// ---------------------------------------------------------------------------
// Completion and approximations

int rejecting_priority(int lo, int hi) {
    int p = (hi % 2 == 1) ? hi : hi - 1;
    if (p < lo) p = hi + 1;
    return p;
}

namespace {

int add_sink(ParityAutomaton& a, const char* name, int prio) {
    int s = a.add_state(name);
    for (int l = 0; l < a.num_letters(); ++l) a.trans.push_back({s, l, prio, s});
    return s;
}

ParityAutomaton complete_with_sink(ParityAutomaton a, int sink_prio) {
    std::vector<std::pair<int, int>> missing;
    for (int q = 0; q < a.num_states(); ++q)
        for (int l = 0; l < a.num_letters(); ++l)
            if (a.out(q, l).empty()) missing.push_back({q, l});
    if (missing.empty()) return a;
    int s = add_sink(a, kRejSink, sink_prio);
    for (auto [q, l] : missing) a.trans.push_back({q, l, sink_prio, s});
    a.finalize();
    return a;
}

}  // namespace

ParityAutomaton validate_and_complete(const ParityAutomaton& a, CompleteMode mode) {
    if (a.alphabet.empty()) throw Error("empty alphabet");
    if (a.is_complete()) return a;
    if (mode == CompleteMode::Reject) throw Error("automaton is not complete");
    return complete_with_sink(a, rejecting_priority(a.lo, a.hi));
}

ParityAutomaton approximate(const ParityAutomaton& in, Approx kind) {
    const bool needs_lo1 = kind == Approx::Above1 || kind == Approx::Safe;
    if (needs_lo1 && in.has_priority(0)) throw Error("approximation requires priorities >= 1");
    ParityAutomaton a = validate_and_complete(in, CompleteMode::AddRejectingSink);
    ParityAutomaton r = a;
    r.trans.clear();
    // Transition i of the completed input stays at index i; sink loops come last.
    const int redirect = needs_lo1 ? 1 : 0;
    int sink = -1, loop_prio = 0;
    if (a.has_priority(redirect)) {
        const bool acc = !needs_lo1;
        sink = r.add_state(acc ? kAccSink : kRejSink);
        loop_prio = kind == Approx::Above0 ? 2 : kind == Approx::Reach ? 0 : 1;
    }
    for (const Transition& t : a.trans) {
        if (t.prio == redirect) r.trans.push_back({t.src, t.letter, t.prio, sink});
        else if (kind == Approx::Safe) r.trans.push_back({t.src, t.letter, 2, t.dst});
        else r.trans.push_back(t);
    }
    if (sink >= 0)
        for (int l = 0; l < r.num_letters(); ++l) r.trans.push_back({sink, l, loop_prio, sink});
    r.finalize();
    return r;
}

// ---------------------------------------------------------------------------
// Coreachability

std::vector<char> nonempty_states(const ParityAutomaton& a) {
    const int n = a.num_states();
    Digraph g(n), rev(n);
    for (const Transition& t : a.trans) {
        g.add_edge(t.src, t.dst);
        rev.add_edge(t.dst, t.src);
    }
    std::vector<int> good;
    for (int c = a.lo + (a.lo % 2); c <= a.hi; c += 2) {
        std::vector<char> mask(a.num_trans(), 0);
        for (int i = 0; i < a.num_trans(); ++i) mask[i] = a.trans[i].prio >= c;
        SccResult scc = strongly_connected(g, mask);
        for (const Transition& t : a.trans)
            if (t.prio == c && scc.comp[t.src] == scc.comp[t.dst]) good.push_back(t.src);
    }
    return reachable_from(rev, good);
}

WcrPartition weak_coreachability(const ParityAutomaton& a) {
    const int n = a.num_states();
    WcrPartition w;
    w.n = n;
    w.cr.assign(static_cast<std::size_t>(n) * n, 0);
    std::vector<std::pair<int, int>> work{{a.initial, a.initial}};
    w.cr[static_cast<std::size_t>(a.initial) * n + a.initial] = 1;
    while (!work.empty()) {
        auto [p, q] = work.back();
        work.pop_back();
        for (int l = 0; l < a.num_letters(); ++l)
            for (int i : a.out(p, l))
                for (int j : a.out(q, l)) {
                    int p2 = a.trans[i].dst, q2 = a.trans[j].dst;
                    auto& c = w.cr[static_cast<std::size_t>(p2) * n + q2];
                    if (!c) {
                        c = 1;
                        w.cr[static_cast<std::size_t>(q2) * n + p2] = 1;
                        work.push_back({p2, q2});
                        work.push_back({q2, p2});
                    }
                }
    }
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (w.coreachable(p, q)) parent[find(p)] = find(q);
    w.cls.assign(n, -1);
    std::vector<int> root_cls(n, -1);
    for (int q = 0; q < n; ++q) {
        if (!w.coreachable(q, q)) continue;
        int r = find(q);
        if (root_cls[r] < 0) {
            root_cls[r] = static_cast<int>(w.classes.size());
            w.classes.emplace_back();
        }
        w.cls[q] = root_cls[r];
        w.classes[root_cls[r]].push_back(q);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Delay, Büchi conversion, helpers

ParityAutomaton delay(const ParityAutomaton& in, int k) {
    if (k < 0) throw Error("delay depth must be nonnegative");
    ParityAutomaton a = in;
    for (int step = 0; step < k; ++step) {
        const int n = a.num_states(), m = a.num_letters();
        ParityAutomaton d;
        d.alphabet = a.alphabet;
        for (int q = 0; q < n; ++q)
            for (int l = 0; l < m; ++l) d.states.push_back(a.states[q] + "." + a.alphabet[l]);
        d.initial = d.add_state("__delay");
        auto id = [m](int q, int l) { return q * m + l; };
        for (int l = 0; l < m; ++l) d.trans.push_back({d.initial, l, 0, id(a.initial, l)});
        for (const Transition& t : a.trans)
            for (int b = 0; b < m; ++b) d.trans.push_back({id(t.src, t.letter), b, t.prio, id(t.dst, b)});
        d.finalize();
        a = std::move(d);
    }
    return a;
}

ParityAutomaton parity_to_buchi(const ParityAutomaton& in) {
    const ParityAutomaton a = validate_and_complete(in, CompleteMode::Reject);
    const int n = a.num_states();
    std::vector<int> evens;
    for (int e = a.lo + (a.lo % 2); e <= a.hi; e += 2) evens.push_back(e);
    const bool guess_copy = a.lo % 2 == 1;  // with lo even, copy lo already is the whole automaton
    // layer 0 = guessing copy (if present), then one layer per even priority
    const int layers = static_cast<int>(evens.size()) + (guess_copy ? 1 : 0);
    auto layer_min = [&](int L) { return guess_copy ? (L == 0 ? -1 : evens[L - 1]) : evens[L]; };
    ParityAutomaton b;
    b.alphabet = a.alphabet;
    std::vector<int> id(static_cast<std::size_t>(n) * layers, -1);
    std::vector<std::pair<int, int>> work;
    auto get = [&](int q, int L) {
        int& v = id[static_cast<std::size_t>(L) * n + q];
        if (v < 0) {
            v = b.num_states();
            b.states.push_back(layer_min(L) < 0 ? a.states[q] : a.states[q] + "." + std::to_string(layer_min(L)));
            work.push_back({q, L});
        }
        return v;
    };
    b.initial = get(a.initial, 0);
    while (!work.empty()) {
        auto [q, L] = work.back();
        work.pop_back();
        int src = id[static_cast<std::size_t>(L) * n + q];
        int e = layer_min(L);
        for (int l = 0; l < a.num_letters(); ++l)
            for (int i : a.out(q, l)) {
                const Transition& t = a.trans[i];
                if (e < 0) {
                    b.trans.push_back({src, l, 1, get(t.dst, L)});
                    for (int L2 = 1; L2 < layers; ++L2)
                        if (t.prio >= layer_min(L2)) b.trans.push_back({src, l, t.prio == layer_min(L2) ? 0 : 1, get(t.dst, L2)});
                } else if (t.prio >= e) {
                    b.trans.push_back({src, l, t.prio == e ? 0 : 1, get(t.dst, L)});
                    if (!guess_copy && L == 0)
                        for (int L2 = 1; L2 < layers; ++L2)
                            if (t.prio >= layer_min(L2))
                                b.trans.push_back({src, l, t.prio == layer_min(L2) ? 0 : 1, get(t.dst, L2)});
                }
            }
    }
    // States are numbered in discovery order, which is deterministic.
    b.finalize();
    return b;
}

bool lasso_member(const ParityAutomaton& a, const LassoWord& w, int from_state) {
    if (w.cycle.empty()) throw Error("lasso cycle must be nonempty");
    for (int l : w.prefix)
        if (l < 0 || l >= a.num_letters()) throw Error("lasso letter outside alphabet");
    for (int l : w.cycle)
        if (l < 0 || l >= a.num_letters()) throw Error("lasso letter outside alphabet");
    const int nu = static_cast<int>(w.prefix.size()), len = nu + static_cast<int>(w.cycle.size());
    auto letter = [&](int pos) { return pos < nu ? w.prefix[pos] : w.cycle[pos - nu]; };
    const int n = a.num_states();
    Digraph g(n * len);
    std::vector<int> weight;
    for (int q = 0; q < n; ++q)
        for (int pos = 0; pos < len; ++pos) {
            int next = pos + 1 < len ? pos + 1 : nu;
            for (int i : a.out(q, letter(pos))) {
                g.add_edge(q * len + pos, a.trans[i].dst * len + next);
                weight.push_back(a.trans[i].prio);
            }
        }
    int start = from_state < 0 ? a.initial : from_state;
    return has_cycle_with_min_parity(g, weight, {start * len}, 0);
}

ParityAutomaton with_initial(const ParityAutomaton& a, int q) {
    ParityAutomaton b = a;
    b.initial = q;
    b.finalize();
    return b;
}

ParityAutomaton sub_automaton(const ParityAutomaton& a, const std::vector<char>& keep) {
    ParityAutomaton b = a;
    b.trans.clear();
    for (int i = 0; i < a.num_trans(); ++i)
        if (keep[i]) b.trans.push_back(a.trans[i]);
    b.finalize();
    return b;
}

ParityAutomaton shift_priorities(const ParityAutomaton& a, int delta) {
    ParityAutomaton b = a;
    for (Transition& t : b.trans) t.prio += delta;
    b.finalize();
    return b;
}

std::vector<char> reachable_states(const ParityAutomaton& a) {
    Digraph g(a.num_states());
    for (const Transition& t : a.trans) g.add_edge(t.src, t.dst);
    return reachable_from(g, {a.initial});
}

ParityAutomaton two_priority_reduce(const ParityAutomaton& in) {
    if (in.has_priority(0)) throw Error("2-priority reduction requires priorities >= 1");
    ParityAutomaton a = in;
    while (true) {
        bool changed = false;
        Digraph g(a.num_states());
        for (const Transition& t : a.trans) g.add_edge(t.src, t.dst);
        std::vector<char> mask(a.num_trans());
        for (int i = 0; i < a.num_trans(); ++i) mask[i] = a.trans[i].prio >= 2;
        SccResult scc = strongly_connected(g, mask);
        // Transitions of priority >= 2 outside every SCC of the >1 graph become 1.
        for (int i = 0; i < a.num_trans(); ++i) {
            Transition& t = a.trans[i];
            if (t.prio >= 2 && scc.comp[t.src] != scc.comp[t.dst]) {
                t.prio = 1;
                changed = true;
            }
        }
        // SCCs of the >1 graph without a priority-2 transition are lowered by 2.
        std::vector<int> minp(scc.count, -1);
        for (const Transition& t : a.trans)
            if (t.prio >= 2 && scc.comp[t.src] == scc.comp[t.dst]) {
                int& m = minp[scc.comp[t.src]];
                m = m < 0 ? t.prio : std::min(m, t.prio);
            }
        for (Transition& t : a.trans)
            if (t.prio >= 2 && scc.comp[t.src] == scc.comp[t.dst] && minp[scc.comp[t.src]] > 2) {
                t.prio -= 2;
                changed = true;
            }
        a.finalize();
        if (!changed) break;
    }
    return a;
}

ParityAutomaton restrict_states(const ParityAutomaton& a, const std::vector<char>& keep) {
    if (!keep[a.initial]) throw Error("cannot drop the initial state");
    ParityAutomaton r;
    r.alphabet = a.alphabet;
    std::vector<int> id(a.num_states(), -1);
    for (int q = 0; q < a.num_states(); ++q)
        if (keep[q]) {
            id[q] = r.num_states();
            r.states.push_back(a.states[q]);
        }
    r.initial = id[a.initial];
    for (const Transition& t : a.trans)
        if (id[t.src] >= 0 && id[t.dst] >= 0) r.trans.push_back({id[t.src], t.letter, t.prio, id[t.dst]});
    r.finalize();
    return r;
}

ParityAutomaton trim(const ParityAutomaton& a) { return restrict_states(a, reachable_states(a)); }

bool included_in_deterministic(const ParityAutomaton& a, const ParityAutomaton& d, LassoWord* cex) {
    if (!d.is_deterministic() || !d.is_complete()) throw Error("inclusion oracle requires a deterministic complete automaton");
    if (a.alphabet != d.alphabet) throw Error("alphabet mismatch");
    const int na = a.num_states(), nd = d.num_states();
    Digraph g(na * nd);
    std::vector<int> wa, wd, lab;
    for (const Transition& t : a.trans)
        for (int q = 0; q < nd; ++q) {
            int j = d.out(q, t.letter)[0];
            g.add_edge(t.src * nd + q, t.dst * nd + d.trans[j].dst);
            wa.push_back(t.prio);
            wd.push_back(d.trans[j].prio);
            lab.push_back(t.letter);
        }
    const int root = a.initial * nd + d.initial;
    std::vector<char> reach = reachable_from(g, {root});
    std::vector<char> mask(g.num_edges());
    for (int e = a.lo + (a.lo % 2); e <= a.hi; e += 2)
        for (int o = d.lo + 1 - (d.lo % 2); o <= d.hi; o += 2) {
            for (int i = 0; i < g.num_edges(); ++i) mask[i] = reach[g.src[i]] && wa[i] >= e && wd[i] >= o;
            SccResult scc = strongly_connected(g, mask);
            std::vector<char> has_e(scc.count, 0), has_o(scc.count, 0);
            for (int i = 0; i < g.num_edges(); ++i) {
                if (!mask[i] || scc.comp[g.src[i]] != scc.comp[g.dst[i]]) continue;
                if (wa[i] == e) has_e[scc.comp[g.src[i]]] = 1;
                if (wd[i] == o) has_o[scc.comp[g.src[i]]] = 1;
            }
            for (int c = 0; c < scc.count; ++c) {
                if (!has_e[c] || !has_o[c]) continue;
                if (cex) {
                    // Prefix: BFS path from root to the component; cycle: tour through an e-edge and an o-edge.
                    auto path = [&](int from, const std::vector<char>& target, const std::vector<char>& emask) {
                        std::vector<int> pred(g.n, -2);
                        std::vector<int> q{from};
                        pred[from] = -1;
                        std::size_t h = 0;
                        int hit = target[from] ? from : -1;
                        std::vector<std::vector<int>> outs(g.n);
                        for (int i = 0; i < g.num_edges(); ++i)
                            if (emask.empty() || emask[i]) outs[g.src[i]].push_back(i);
                        while (hit < 0 && h < q.size()) {
                            int v = q[h++];
                            for (int i : outs[v]) {
                                int x = g.dst[i];
                                if (pred[x] != -2) continue;
                                pred[x] = i;
                                if (target[x]) {
                                    hit = x;
                                    break;
                                }
                                q.push_back(x);
                            }
                        }
                        std::vector<int> edges;
                        if (hit < 0) throw Error("internal: counterexample path not found");
                        for (int v = hit; v != from; v = g.src[pred[v]]) edges.push_back(pred[v]);
                        std::reverse(edges.begin(), edges.end());
                        return edges;
                    };
                    std::vector<char> in_c(g.n, 0);
                    for (int v = 0; v < g.n; ++v) in_c[v] = scc.comp[v] == c;
                    std::vector<int> pre = path(root, in_c, {});
                    int entry = pre.empty() ? root : g.dst[pre.back()];
                    std::vector<char> cm(g.num_edges());
                    int ee = -1, eo = -1;
                    for (int i = 0; i < g.num_edges(); ++i) {
                        cm[i] = mask[i] && scc.comp[g.src[i]] == c && scc.comp[g.dst[i]] == c;
                        if (cm[i] && wa[i] == e && ee < 0) ee = i;
                        if (cm[i] && wd[i] == o && eo < 0) eo = i;
                    }
                    std::vector<int> cyc;
                    int cur = entry;
                    for (int target_edge : {ee, eo}) {
                        std::vector<char> tgt(g.n, 0);
                        tgt[g.src[target_edge]] = 1;
                        auto p = path(cur, tgt, cm);
                        cyc.insert(cyc.end(), p.begin(), p.end());
                        cyc.push_back(target_edge);
                        cur = g.dst[target_edge];
                    }
                    std::vector<char> tgt(g.n, 0);
                    tgt[entry] = 1;
                    auto back = path(cur, tgt, cm);
                    cyc.insert(cyc.end(), back.begin(), back.end());
                    cex->prefix.clear();
                    cex->cycle.clear();
                    for (int i : pre) cex->prefix.push_back(lab[i]);
                    for (int i : cyc) cex->cycle.push_back(lab[i]);
                }
                return false;
            }
        }
    return true;
}

// ---------------------------------------------------------------------------
// Random generation

ParityAutomaton random_deterministic(std::uint64_t seed, const RandomParams& p) {
    RandomParams q = p;
    q.determinism_bias = 1.0;
    q.hd_by_construction = false;
    return random_automaton(seed, q);
}

ParityAutomaton random_automaton(std::uint64_t seed, const RandomParams& p) {
    if (p.states <= 0) throw Error("random automaton needs at least one state");
    if (p.letters <= 0) throw Error("random automaton needs a nonempty alphabet");
    if (p.lo < 0 || p.hi < p.lo) throw Error("bad priority range");
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto coin = [&](double pr) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < pr; };
    ParityAutomaton a;
    for (int l = 0; l < p.letters; ++l) a.alphabet.push_back(std::string(1, static_cast<char>('a' + l)));
    for (int q = 0; q < p.states; ++q) a.states.push_back("q" + std::to_string(q));
    a.initial = 0;
    const bool det = p.hd_by_construction || p.determinism_bias >= 1.0;
    for (int q = 0; q < p.states; ++q)
        for (int l = 0; l < p.letters; ++l) {
            a.trans.push_back({q, l, uni(p.lo, p.hi), uni(0, p.states - 1)});
            if (det || coin(p.determinism_bias)) continue;
            for (int extra = 0; extra < 2; ++extra)
                if (coin(p.density)) a.trans.push_back({q, l, uni(p.lo, p.hi), uni(0, p.states - 1)});
        }
    a.finalize();
    if (!p.hd_by_construction) return a;
    // Add transitions one at a time, keeping only those that leave the language unchanged.
    // The deterministic base remains a pruning, so the result is HD.
    const ParityAutomaton base = a;
    int want = p.extra >= 0 ? p.extra : std::max(1, p.states);
    for (int tries = 0; want > 0 && tries < 20 * (want + p.states); ++tries) {
        Transition t{uni(0, p.states - 1), uni(0, p.letters - 1), uni(p.lo, p.hi), uni(0, p.states - 1)};
        if (std::find(a.trans.begin(), a.trans.end(), t) != a.trans.end()) continue;
        ParityAutomaton b = a;
        b.trans.push_back(t);
        b.finalize();
        bool ok = true;
        // Every state must keep its language; checked from each source state of the base.
        for (int q = 0; q < p.states && ok; ++q) ok = included_in_deterministic(with_initial(b, q), with_initial(base, q));
        if (!ok) continue;
        a = std::move(b);
        --want;
    }
    return a;
}

LassoWord random_lasso(std::uint64_t seed, int letters, int max_prefix, int max_cycle) {
    std::mt19937_64 rng(seed);
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    LassoWord w;
    int lu = uni(0, max_prefix), lv = uni(1, std::max(1, max_cycle));
    for (int i = 0; i < lu; ++i) w.prefix.push_back(uni(0, letters - 1));
    for (int i = 0; i < lv; ++i) w.cycle.push_back(uni(0, letters - 1));
    return w;
}

}  // namespace hdtk
