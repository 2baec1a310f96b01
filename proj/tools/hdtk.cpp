#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "corpus.hpp"
#include "hdtk/buchi_det.hpp"
#include "hdtk/hd.hpp"
#include "hdtk/normal_forms.hpp"
#include "hdtk/reductions.hpp"
#include "hdtk/token_games.hpp"
#include "hdtk/zielonka.hpp"

using namespace hdtk;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "hdtk 1.0.0";

// Exit codes: 0 holds / Eve wins, 1 fails / Adam wins, 2 usage or precondition error.
struct Envelope {
    std::string command;
    std::uint64_t seed = 0;
    json inputs = json::object();
    json verdicts = json::object();
    json certificates = json::array();
    json timings = json::object();
    std::vector<std::string> body;  // extra lines for the text format (dumps)
};

struct Options {
    bool json = false;
    bool timings = false;
    std::uint64_t seed = 0;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

// FNV-1a, enough to tell inputs apart in an envelope.
std::string digest(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ParityAutomaton load_automaton(Envelope& env, const std::string& path) {
    std::string text = read_file(path);
    env.inputs[path] = digest(text);
    return parse_tpa(text);
}

std::string text_value(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

void emit(const Envelope& env, const Options& opt) {
    if (opt.json) {
        json j;
        j["command"] = env.command;
        j["version"] = kVersion;
        j["seed"] = env.seed;
        j["inputs"] = env.inputs;
        j["verdicts"] = env.verdicts;
        j["certificates"] = env.certificates;
        if (opt.timings) j["timings"] = env.timings;
        std::cout << j.dump() << "\n";
        return;
    }
    for (auto& [k, v] : env.verdicts.items()) std::cout << k << ": " << text_value(v) << "\n";
    for (auto& c : env.certificates) std::cout << "certificate: " << c.get<std::string>() << "\n";
    if (opt.timings)
        for (auto& [k, v] : env.timings.items()) std::cout << "time_" << k << ": " << v.get<double>() << "\n";
    for (auto& line : env.body) std::cout << line << "\n";
}

template <class F>
auto timed(Envelope& env, const std::string& name, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    auto r = f();
    env.timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

int state_of(const ParityAutomaton& a, const std::string& name) {
    int q = a.state_id(name);
    if (q < 0) throw Error("unknown state '" + name + "'");
    return q;
}

// Writes the product game and the winner's strategy in the check-hd certificate format.
void write_token_certificate(Envelope& env, const std::string& path, const TokenGame& g, const TokenSolution& s,
                             Player winner) {
    HdVerdict v;
    v.game = g;
    v.solution = s;
    v.winner = winner;
    write_file(path, v.certificate());
    env.certificates.push_back(path);
}

int threads_from_env() {
    if (const char* t = std::getenv("HDTK_THREADS")) {
        int n = std::atoi(t);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"History-determinism toolkit for parity automata"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);
    Options opt;
    app.add_flag("--json", opt.json, "Print the result envelope as one JSON object");
    app.add_flag("--timings", opt.timings, "Include timings in the output");
    app.add_option("--seed", opt.seed, "Seed for all randomness")->default_val(0);

    Envelope env;
    int code = 0;
    std::function<void()> action;

    // check-hd
    std::string a_path, b_path, out_path, cert_path;
    auto* check = app.add_subcommand("check-hd", "Decide history-determinism with the 2-token game");
    check->add_option("automaton", a_path)->required();
    check->add_option("--certificate", cert_path, "Write the winner's strategy in the product game");
    check->callback([&] {
        action = [&] {
            ParityAutomaton a = load_automaton(env, a_path);
            HdVerdict v = timed(env, "check_hd", [&] { return check_hd(a); });
            env.verdicts["verdict"] = v.hd ? "HD" : "notHD";
            env.verdicts["winner"] = player_name(v.winner);
            env.verdicts["certificate_ok"] = v.certificate_ok;
            if (!cert_path.empty()) {
                write_file(cert_path, v.certificate());
                env.certificates.push_back(cert_path);
            }
            code = v.hd ? 0 : 1;
        };
    });

    // verify-certificate
    auto* verify = app.add_subcommand("verify-certificate", "Re-check a certificate written by --certificate");
    verify->add_option("certificate", a_path)->required();
    verify->callback([&] {
        action = [&] {
            std::string text = read_file(a_path);
            env.inputs[a_path] = digest(text);
            const bool ok = verify_certificate(text);
            env.verdicts["valid"] = ok;
            code = ok ? 0 : 1;
        };
    });

    // determinize
    bool trace = false;
    auto* det = app.add_subcommand("determinize", "Determinise a history-deterministic Buchi automaton");
    det->add_option("automaton", a_path)->required();
    det->add_option("-o,--output", out_path, "Output file (default stdout)");
    det->add_flag("--trace", trace, "Print the per-iteration rank maps and edits");
    det->callback([&] {
        action = [&] {
            ParityAutomaton a = load_automaton(env, a_path);
            DetTrace t;
            ParityAutomaton d = timed(env, "determinize", [&] { return determinize_hd_buchi(a, &t); });
            env.verdicts["input_states"] = t.input_states;
            env.verdicts["extracted_transitions"] = t.extracted_transitions;
            env.verdicts["rank_iterations"] = static_cast<int>(t.steps.size());
            env.verdicts["output_states"] = t.output_states;
            if (trace)
                for (std::size_t i = 0; i < t.steps.size(); ++i) {
                    const RankStep& s = t.steps[i];
                    std::string line = "step " + std::to_string(i) + " opt";
                    for (std::size_t q = 0; q < s.states.size(); ++q)
                        line += " " + s.states[q] + "=" + std::to_string(s.opt[q]);
                    line += " removed " + std::to_string(s.removed.size()) + " relabelled " +
                            std::to_string(s.relabelled.size());
                    env.body.push_back(line);
                }
            if (out_path.empty()) env.body.push_back(serialize_tpa(d));
            else write_file(out_path, serialize_tpa(d));
        };
    });

    // normalize
    bool paranoid = false;
    auto* norm = app.add_subcommand("normalize", "Normalise a [0,2k] automaton on which Eve wins G2 everywhere");
    norm->add_option("automaton", a_path)->required();
    norm->add_option("-o,--output", out_path, "Output file (default stdout)");
    norm->add_flag("--paranoid", paranoid, "Validate the invariants after every subprocedure");
    norm->add_flag("--trace", trace, "Print per-iteration statistics");
    norm->callback([&] {
        action = [&] {
            ParityAutomaton a = load_automaton(env, a_path);
            std::vector<NormalStep> steps;
            NormalizeOptions no;
            no.paranoid = paranoid;
            ParityAutomaton b = timed(env, "normalize", [&] { return normalize_even(a, no, &steps); });
            env.verdicts["input_states"] = a.num_states();
            env.verdicts["output_states"] = b.num_states();
            env.verdicts["iterations"] = static_cast<int>(steps.size());
            if (trace)
                for (const NormalStep& s : steps)
                    env.body.push_back("iteration " + std::to_string(s.iteration) + " rank_rounds " +
                                       std::to_string(s.rank_rounds) + " removed_by_rank " +
                                       std::to_string(s.removed_by_rank) + " relabelled_by_rank " +
                                       std::to_string(s.relabelled_by_rank) + " removed_by_separation " +
                                       std::to_string(s.removed_by_separation) + " reduced " +
                                       std::to_string(s.reduced) + " states " + std::to_string(s.states_after));
            if (out_path.empty()) env.body.push_back(serialize_tpa(b));
            else write_file(out_path, serialize_tpa(b));
        };
    });

    // tokengame
    std::string kind = "g2", starts;
    int k = 2;
    auto* tg = app.add_subcommand("tokengame", "Solve a token game");
    tg->add_option("--kind", kind, "sim | g1 | g2 | gk | joker | lookahead")
        ->check(CLI::IsMember({"sim", "g1", "g2", "gk", "joker", "lookahead"}));
    tg->add_option("-k", k, "Tokens for gk, delay for lookahead")->default_val(2);
    tg->add_option("--starts", starts, "Start states q,p[,r] (default: initial states)");
    tg->add_option("automaton", a_path)->required();
    tg->add_option("adam", b_path, "Adam's automaton for sim and g1");
    tg->add_option("--certificate", cert_path, "Write the winner's strategy in the product game");
    tg->callback([&] {
        action = [&] {
            ParityAutomaton a = load_automaton(env, a_path);
            ParityAutomaton b = b_path.empty() ? a : load_automaton(env, b_path);
            TokenGame g;
            std::vector<int> tuple;
            for (auto& name : split(starts, ','))
                tuple.push_back(state_of(tuple.empty() ? a : b, name));
            auto default_tuple = [&](int tokens) {
                if (tuple.empty()) {
                    tuple.push_back(a.initial);
                    for (int i = 0; i < tokens; ++i) tuple.push_back(b.initial);
                }
                if (static_cast<int>(tuple.size()) != tokens + 1)
                    throw Error("--starts needs " + std::to_string(tokens + 1) + " states");
            };
            if (kind == "sim") {
                default_tuple(1);
                g = build_sim(a, b, {tuple});
            } else if (kind == "g1") {
                default_tuple(1);
                g = build_g1(a, b, {tuple});
            } else if (kind == "g2" || kind == "gk") {
                const int tokens = kind == "g2" ? 2 : k;
                default_tuple(tokens);
                g = build_gk(a, tokens, {tuple});
            } else if (kind == "joker") {
                default_tuple(1);
                g = build_joker(a, {tuple});
            } else {
                if (!starts.empty()) throw Error("lookahead games start from the initial states");
                g = build_lookahead(a, k);
            }
            TokenSolution s = timed(env, "solve", [&] { return solve_token_game(g); });
            const bool eve = kind == "lookahead" ? s.eve_wins_vertex(g.arena.initial) : eve_wins_from(g, s, tuple);
            env.verdicts["kind"] = kind;
            env.verdicts["winner"] = eve ? "Eve" : "Adam";
            env.verdicts["arena_vertices"] = g.arena.num_vertices();
            env.verdicts["product_vertices"] = s.ms.product.game.num_vertices();
            if (!cert_path.empty()) write_token_certificate(env, cert_path, g, s, eve ? Player::Eve : Player::Adam);
            code = eve ? 0 : 1;
        };
    });

    // simulate
    auto* sim = app.add_subcommand("simulate", "Does the first automaton simulate the second");
    sim->add_option("automaton", a_path)->required();
    sim->add_option("other", b_path)->required();
    sim->add_option("--certificate", cert_path, "Write the winner's strategy in the product game");
    sim->callback([&] {
        action = [&] {
            ParityAutomaton a = load_automaton(env, a_path), b = load_automaton(env, b_path);
            std::vector<int> tuple{a.initial, b.initial};
            TokenGame g = build_sim(a, b, {tuple});
            TokenSolution s = timed(env, "solve", [&] { return solve_token_game(g); });
            const bool eve = eve_wins_from(g, s, tuple);
            env.verdicts["simulates"] = eve;
            env.verdicts["winner"] = eve ? "Eve" : "Adam";
            if (!cert_path.empty()) write_token_certificate(env, cert_path, g, s, eve ? Player::Eve : Player::Adam);
            code = eve ? 0 : 1;
        };
    });

    // include
    bool assume_hd = false;
    auto* inc = app.add_subcommand("include", "Language inclusion into a history-deterministic automaton");
    inc->add_option("automaton", a_path)->required();
    inc->add_option("hd", b_path)->required();
    inc->add_flag("--assume-hd", assume_hd, "Skip the history-determinism check of the second automaton");
    inc->callback([&] {
        action = [&] {
            ParityAutomaton a = load_automaton(env, a_path), h = load_automaton(env, b_path);
            const bool in = timed(env, "include", [&] { return inclusion_hd(a, h, assume_hd); });
            env.verdicts["included"] = in;
            if (!in && h.is_deterministic()) {
                LassoWord w;
                inclusion_oracle_det(a, validate_and_complete(h, CompleteMode::AddRejectingSink), &w);
                std::string u, v;
                for (int l : w.prefix) u += (u.empty() ? "" : " ") + a.alphabet[l];
                for (int l : w.cycle) v += (v.empty() ? "" : " ") + a.alphabet[l];
                env.verdicts["counterexample_prefix"] = u;
                env.verdicts["counterexample_cycle"] = v;
            }
            code = in ? 0 : 1;
        };
    });

    // member
    std::string prefix, cycle, from;
    auto* mem = app.add_subcommand("member", "Is the lasso word prefix.cycle^omega accepted");
    mem->add_option("automaton", a_path)->required();
    mem->add_option("--prefix", prefix, "Letters separated by spaces or commas");
    mem->add_option("--cycle", cycle, "Letters separated by spaces or commas")->required();
    mem->add_option("--from", from, "Start state (default: initial)");
    mem->callback([&] {
        action = [&] {
            ParityAutomaton a = load_automaton(env, a_path);
            LassoWord w = parse_lasso(a, prefix, cycle);
            const bool acc = lasso_member(a, w, from.empty() ? -1 : state_of(a, from));
            env.verdicts["accepted"] = acc;
            code = acc ? 0 : 1;
        };
    });

    // ztree
    std::string zkind = "generic", sets;
    int lo = 0, hi = 1, d = 1, d1 = 1, i2 = 0;
    auto* zt = app.add_subcommand("ztree", "Dump a Zielonka tree");
    zt->add_option("--kind", zkind, "generic | 2token | implication")
        ->check(CLI::IsMember({"generic", "2token", "implication"}));
    zt->add_option("--lo", lo, "generic: lowest colour")->default_val(0);
    zt->add_option("--hi", hi, "generic: highest colour")->default_val(1);
    zt->add_option("--accept", sets, "generic: accepting colour sets, e.g. \"0;0,1\"");
    zt->add_option("-d", d, "2token: priorities [0,d]; implication: second range [i,i+d]")->default_val(1);
    zt->add_option("--d1", d1, "implication: first range [0,d1]")->default_val(1);
    zt->add_option("-i", i2, "implication: lower end of the second range")->default_val(0);
    zt->callback([&] {
        action = [&] {
            MullerCondition cond;
            ZielonkaTree t;
            if (zkind == "generic") {
                std::vector<std::vector<int>> acc;
                for (auto& s : split(sets, ';')) {
                    std::vector<int> x;
                    for (auto& c : split(s, ',')) x.push_back(std::stoi(c));
                    acc.push_back(x);
                }
                cond = explicit_condition(lo, hi, acc);
                t = build_tree(cond);
            } else if (zkind == "2token") {
                TwoTokenCondition r = build_2token_condition(d);
                cond = r.cond;
                t = r.tree;
            } else {
                std::tie(cond, t) = build_implication_condition(d1, d, i2);
            }
            env.verdicts["nodes"] = static_cast<int>(t.nodes.size());
            env.verdicts["height"] = t.height();
            env.verdicts["branches"] = t.num_branches();
            env.verdicts["labels"] = t.distinct_labels();
            std::istringstream in(t.dump(cond));
            for (std::string line; std::getline(in, line);) env.body.push_back(line);
        };
    });

    // reduce
    bool no_pad = false;
    auto* red = app.add_subcommand("reduce", "Hardness reductions");
    red->require_subcommand(1);
    auto* s2g = red->add_subcommand("sat2game", "DIMACS CNF to a good implication game");
    s2g->add_option("cnf", a_path)->required();
    s2g->add_option("-o,--output", out_path, "Output file (default stdout)");
    s2g->callback([&] {
        action = [&] {
            std::string text = read_file(a_path);
            env.inputs[a_path] = digest(text);
            ImplicationGame g = sat_to_good_implication(parse_dimacs(text));
            env.verdicts["vertices"] = g.arena.num_vertices();
            env.verdicts["edges"] = g.arena.num_edges();
            env.verdicts["good"] = g.good;
            if (out_path.empty() || out_path == "-") {
                std::cout << serialize_igame(g);
                env = Envelope{};
                action = nullptr;
                return;
            }
            write_file(out_path, serialize_igame(g));
        };
    });
    auto* g2s = red->add_subcommand("game2sim", "Implication game to a simulation instance (D, H)");
    g2s->add_option("game", a_path)->required();
    g2s->add_option("-o,--output", out_path, "d.tpa,h.tpa")->required();
    g2s->add_flag("--no-pad", no_pad, "Do not duplicate single Eve edges");
    g2s->callback([&] {
        action = [&] {
            std::string text = read_file(a_path);
            env.inputs[a_path] = digest(text);
            auto outs = split(out_path, ',');
            if (outs.size() != 2) throw Error("-o expects two files: d.tpa,h.tpa");
            SimInstance si = implication_to_sim(parse_igame(text).arena, !no_pad);
            write_file(outs[0], serialize_tpa(si.d));
            write_file(outs[1], serialize_tpa(si.h));
            env.verdicts["d_states"] = si.d.num_states();
            env.verdicts["h_states"] = si.h.num_states();
        };
    });

    // crosscheck
    auto* cc = app.add_subcommand("crosscheck", "Five-way verdict check on a good implication game");
    cc->add_option("game", a_path, "Implication game, or a DIMACS file ending in .cnf")->required();
    cc->callback([&] {
        action = [&] {
            std::string text = read_file(a_path);
            env.inputs[a_path] = digest(text);
            const bool cnf = a_path.size() > 4 && a_path.substr(a_path.size() - 4) == ".cnf";
            ImplicationGame g = cnf ? sat_to_good_implication(parse_dimacs(text)) : parse_igame(text);
            ChainReport r = timed(env, "crosscheck", [&] { return crosscheck_chain(g); });
            for (std::size_t i = 0; i < r.verdict.size(); ++i)
                env.verdicts[ChainReport::kNames[i]] = r.verdict[i] ? "Eve" : "Adam";
            env.verdicts["agree"] = r.agree();
            code = r.agree() ? 0 : 1;
        };
    });

    // gen
    std::string gkind = "automaton";
    RandomParams rp;
    int vars = 3, terms = 3;
    auto* gen = app.add_subcommand("gen", "Generate a random automaton or formula");
    gen->add_option("--kind", gkind, "automaton | deterministic | hd | cnf")
        ->check(CLI::IsMember({"automaton", "deterministic", "hd", "cnf"}));
    gen->add_option("--states", rp.states)->default_val(4);
    gen->add_option("--letters", rp.letters)->default_val(2);
    gen->add_option("--lo", rp.lo)->default_val(0);
    gen->add_option("--hi", rp.hi)->default_val(1);
    gen->add_option("--density", rp.density)->default_val(0.5);
    gen->add_option("--vars", vars)->default_val(3);
    gen->add_option("--terms", terms)->default_val(3);
    gen->add_option("-o,--output", out_path, "Output file (default stdout)");
    gen->callback([&] {
        action = [&] {
            std::string text;
            if (gkind == "cnf") {
                std::mt19937_64 rng(opt.seed);
                CnfFormula f;
                f.vars = vars;
                for (int t = 0; t < terms; ++t) {
                    std::vector<int> term;
                    while (term.empty())
                        for (int v = 1; v <= vars; ++v)
                            if (int pick = static_cast<int>(rng() % 3)) term.push_back(pick == 1 ? v : -v);
                    f.terms.push_back(term);
                }
                text = serialize_dimacs(f);
            } else {
                rp.hd_by_construction = gkind == "hd";
                ParityAutomaton a =
                    gkind == "deterministic" ? random_deterministic(opt.seed, rp) : random_automaton(opt.seed, rp);
                text = serialize_tpa(a);
            }
            write_file(out_path.empty() ? "-" : out_path, text);
            action = nullptr;
        };
    });

    // corpus
    auto* cor = app.add_subcommand("corpus", "Run the property suites listed in a corpus file");
    cor->add_option("spec", a_path)->required();
    cor->callback([&] {
        action = [&] {
            std::string text = read_file(a_path);
            env.inputs[a_path] = digest(text);
            std::string base = std::filesystem::path(a_path).parent_path().string();
            cli::CorpusSpec spec = cli::parse_corpus(text, base.empty() ? "." : base);
            auto results = timed(env, "corpus", [&] { return cli::run_corpus(spec, opt.seed, threads_from_env()); });
            int checks = 0, failed = 0;
            for (auto& r : results) {
                checks += r.checks;
                failed += r.failures > 0;
                std::string line = r.property + " (line " + std::to_string(r.line) + "): " +
                                   (r.failures ? "FAIL " : "pass ") + std::to_string(r.checks - r.failures) + "/" +
                                   std::to_string(r.checks);
                if (r.failures) line += " first failure: " + r.first_failure;
                env.body.push_back(line);
                if (opt.json) env.verdicts[r.property + "@" + std::to_string(r.line)] = r.failures ? "FAIL" : "pass";
            }
            env.verdicts["properties"] = static_cast<int>(results.size());
            env.verdicts["checks"] = checks;
            env.verdicts["failed"] = failed;
            code = failed ? 1 : 0;
        };
    });

    // game solve
    auto* game = app.add_subcommand("game", "Parity games");
    game->require_subcommand(1);
    auto* solve = game->add_subcommand("solve", "Solve a parity game in arena dump format");
    solve->add_option("arena", a_path)->required();
    solve->add_option("--certificate", cert_path, "Write both strategies");
    solve->callback([&] {
        action = [&] {
            std::string text = read_file(a_path);
            env.inputs[a_path] = digest(text);
            ParityGame g = parse_arena(text);
            Solution s = timed(env, "solve", [&] { return solve_parity(g); });
            std::string eve, adam;
            for (int v = 0; v < g.num_vertices(); ++v) (s.eve_wins[v] ? eve : adam) += " " + g.vertex_name(v);
            env.verdicts["winner"] = s.eve_wins[g.initial] ? "Eve" : "Adam";
            env.verdicts["eve_region"] = eve.empty() ? "" : eve.substr(1);
            env.verdicts["adam_region"] = adam.empty() ? "" : adam.substr(1);
            if (!cert_path.empty()) {
                std::ostringstream os;
                os << g.dump();
                for (int v = 0; v < g.num_vertices(); ++v)
                    if (s.strategy[v] >= 0) os << "strategy " << v << " " << s.strategy[v] << "\n";
                write_file(cert_path, os.str());
                env.certificates.push_back(cert_path);
            }
            code = s.eve_wins[g.initial] ? 0 : 1;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    for (auto* sub : app.get_subcommands()) {
        env.command = sub->get_name();
        for (auto* inner : sub->get_subcommands()) env.command += " " + inner->get_name();
    }
    env.seed = opt.seed;
    try {
        if (action) action();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (action) emit(env, opt);
    return code;
}
