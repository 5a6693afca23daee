/*
 * Copyright 2026 The uptoind authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "uptoind/ccs.hpp"
#include "uptoind/certify.hpp"
#include "uptoind/errors.hpp"
#include "uptoind/lattice.hpp"
#include "uptoind/observable.hpp"
#include "uptoind/relation.hpp"
#include "uptoind/spectrum.hpp"
#include "uptoind/upto.hpp"

namespace {

using namespace uptoind;

// Exit codes, stable: 0 accept/true, 1 reject/false, 2 usage or resource.
constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
}

// --upto takes the term inline or as a path to a file holding it
std::string upto_source(const std::string& arg) {
    std::ifstream in(arg, std::ios::binary);
    if (!in) return arg;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A lone system has unnamed states, yet pairs are conventionally written
// s0,s1,... (or t0,... when the file plays the second role), so sK and tK
// fall back to index K there. Side-by-side systems keep strict names.
StateId resolve_state_token(const Lts& lts, const std::string& token, bool single_system) {
    try {
        return resolve_state(lts, token);
    } catch (const Error&) {
        if (single_system && token.size() >= 2 && (token[0] == 's' || token[0] == 't') &&
            std::all_of(token.begin() + 1, token.end(),
                        [](unsigned char c) { return std::isdigit(c); }))
            return resolve_state(lts, token.substr(1));
        throw;
    }
}

std::pair<std::string, std::string> split_binding(const std::string& arg, const char* flag) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0)
        throw Error(std::string(flag) + " expects NAME=PATH, got '" + arg + "'");
    return {arg.substr(0, eq), arg.substr(eq + 1)};
}

Family family_of(const std::string& name) {
    if (auto f = parse_family(name)) return *f;
    throw Error("unknown family '" + name +
                "' (expected trace, failure, ready, failure-trace, ready-trace or simulation)");
}

struct Inputs {
    std::string lts_path;
    std::string lts2_path;
    std::string ccs_path;
    std::vector<std::string> const_bindings;  // NAME=PATH
    std::vector<std::string> ctx_bindings;    // NAME=PATH
    std::size_t powerset_cap = kDefaultPowersetCap;
    std::size_t state_cap = 10000;
};

// The loaded system plus the name bindings needed to resolve states and
// relation files against it.
struct World {
    UptoEnv env;
    bool ccs_mode = false;
    bool single_lts = false;
    std::vector<std::pair<std::string, CcsTerm>> defs;  // ccs mode only

    StateId state_of_token(const std::string& token) const {
        if (ccs_mode) {
            for (const auto& [name, term] : defs)
                if (name == token) {
                    auto it = env.state_ids.find(normal_form(term));
                    if (it != env.state_ids.end()) return it->second;
                }
            // Not a defined name: accept a literal process term.
            CcsTerm t = normal_form(parse_ccs(token));
            auto it = env.state_ids.find(t);
            if (it == env.state_ids.end())
                throw Error("process '" + token + "' is not in the unfolded state space");
            return it->second;
        }
        return resolve_state_token(env.lts, token, single_lts);
    }
};

std::map<std::string, std::vector<CcsTerm>> load_context_sets(const Inputs& in) {
    std::map<std::string, std::vector<CcsTerm>> sets;
    for (const auto& arg : in.ctx_bindings) {
        auto [name, path] = split_binding(arg, "--ctx");
        std::vector<CcsTerm> cs;
        for (auto& [label, term] : parse_ccs_file(read_file(path))) {
            (void)label;  // per-line names are labels; the set is named by the flag
            if (term.hole_count() != 1)
                throw Error("context set '" + name + "': '" + print_ccs(term) +
                            "' must contain exactly one hole");
            cs.push_back(std::move(term));
        }
        if (cs.empty()) throw Error("context set '" + name + "' is empty");
        sets[name] = std::move(cs);
    }
    return sets;
}

// Seeds for unfolding: the defined terms, closed under the loaded context
// sets to the given depth so that ctx() application stays inside the space.
std::vector<CcsTerm> seed_closure(const std::vector<CcsTerm>& base,
                                  const std::map<std::string, std::vector<CcsTerm>>& sets,
                                  unsigned depth, std::size_t cap) {
    std::vector<CcsTerm> all = base;
    std::set<CcsTerm> seen;
    for (const CcsTerm& t : base) seen.insert(normal_form(t));
    std::vector<CcsTerm> frontier = base;
    for (unsigned d = 0; d < depth; ++d) {
        std::vector<CcsTerm> next;
        for (const auto& [name, cs] : sets) {
            (void)name;
            for (const CcsTerm& c : cs)
                for (const CcsTerm& t : frontier) {
                    CcsTerm plugged = subst_hole(c, t);
                    if (seen.insert(normal_form(plugged)).second) {
                        if (all.size() >= cap)
                            throw CapExceeded("context seeding exceeded the state cap of " +
                                              std::to_string(cap));
                        all.push_back(plugged);
                        next.push_back(std::move(plugged));
                    }
                }
        }
        frontier = std::move(next);
    }
    return all;
}

// In ccs mode a relation file names defined processes: two names per line.
Relation parse_rel_by_defs(const std::string& text, const World& w) {
    Relation r(w.env.lts.state_count());
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a)) continue;
        if (!(ls >> b) || (ls >> extra))
            throw ParseError("expected two process names per line", line_no, 1);
        r.add(w.state_of_token(a), w.state_of_token(b));
    }
    return r;
}

Relation load_relation(const std::string& path, const World& w) {
    const std::string text = read_file(path);
    if (w.ccs_mode) return parse_rel_by_defs(text, w);
    return parse_rel(text, w.env.lts);
}

// Builds the system from --lts/--lts2 or --ccs, loads context sets and
// relation constants, and applies the powerset cap. `ctx_rounds` controls
// how many context-application layers are added to the unfolding seeds.
World build_world(const Inputs& in, unsigned ctx_rounds) {
    if (!in.ccs_path.empty() && !in.lts_path.empty())
        throw Error("--lts and --ccs are mutually exclusive");
    if (in.ccs_path.empty() && in.lts_path.empty())
        throw Error("one of --lts or --ccs is required");
    if (!in.lts2_path.empty() && in.lts_path.empty())
        throw Error("--lts2 needs --lts");

    World w;
    auto sets = load_context_sets(in);

    if (!in.ccs_path.empty()) {
        w.ccs_mode = true;
        w.defs = parse_ccs_file(read_file(in.ccs_path));
        if (w.defs.empty()) throw Error("'" + in.ccs_path + "' defines no processes");
        std::vector<CcsTerm> base;
        for (const auto& [name, term] : w.defs) {
            if (term.hole_count() != 0)
                throw Error("process '" + name + "' contains a hole; holes belong in context files");
            base.push_back(term);
        }
        auto seeds = seed_closure(base, sets, sets.empty() ? 0 : ctx_rounds, in.state_cap);
        w.env = UptoEnv::for_processes(sos_lts(seeds, in.state_cap));
    } else {
        Lts lts = parse_aut(read_file(in.lts_path));
        if (!in.lts2_path.empty())
            lts = disjoint_union(lts, parse_aut(read_file(in.lts2_path))).first;
        else
            w.single_lts = true;
        w.env = UptoEnv::for_lts(std::move(lts));
    }

    w.env.contexts = std::move(sets);
    w.env.powerset_cap = in.powerset_cap;
    for (const auto& arg : in.const_bindings) {
        auto [name, path] = split_binding(arg, "--const");
        w.env.constants[name] = load_relation(path, w);
    }
    return w;
}

// How the formula is satisfied: one line per modal step, conjunction
// branches indented.
void explain_sat(const Lts& lts, StateId p, const Observable& th, const std::string& indent,
                 std::ostream& os) {
    switch (th.kind()) {
        case Observable::Kind::Atom:
            os << indent << lts.state_name(p) << " satisfies " << print_formula(th, lts) << "\n";
            return;
        case Observable::Kind::Diamond:
            for (StateId q : lts.successors(p, th.action()))
                if (sat(lts, q, th.body())) {
                    os << indent << lts.state_name(p) << " -" << lts.action_label(th.action())
                       << "-> " << lts.state_name(q) << "\n";
                    if (!th.body().is_top()) explain_sat(lts, q, th.body(), indent + "  ", os);
                    return;
                }
            return;  // unreachable when the formula holds
        case Observable::Kind::Conj:
            if (th.is_top()) {
                os << indent << lts.state_name(p) << " satisfies tt\n";
                return;
            }
            for (const Observable& c : th.children()) explain_sat(lts, p, c, indent, os);
            return;
    }
}

std::optional<std::pair<std::string, std::string>> split_pair(const std::string& arg) {
    auto comma = arg.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == arg.size())
        return std::nullopt;
    return std::make_pair(arg.substr(0, comma), arg.substr(comma + 1));
}

nlohmann::json pairs_json(const Relation& r, const Lts& lts) {
    auto out = nlohmann::json::array();
    for (auto [p, q] : r.pairs()) out.push_back({lts.state_name(p), lts.state_name(q)});
    return out;
}

int run_sat(const std::string& lts_path, const std::string& lts2_path,
            const std::string& state, const std::string& formula, std::optional<unsigned> n,
            bool witness, const std::string& format) {
    Lts lts = parse_aut(read_file(lts_path));
    if (!lts2_path.empty())
        lts = disjoint_union(lts, parse_aut(read_file(lts2_path))).first;
    StateId p = resolve_state_token(lts, state, lts2_path.empty());
    Observable th = parse_formula(formula, lts);
    const bool verdict = n ? sat_n(lts, p, th, *n) : sat(lts, p, th);

    if (format == "json") {
        nlohmann::json j{{"schema", "uptoind.sat.v1"},
                         {"state", lts.state_name(p)},
                         {"formula", print_formula(th, lts)},
                         {"verdict", verdict}};
        if (n) j["n"] = *n;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (verdict ? "true" : "false") << "\n";
        if (witness && verdict) explain_sat(lts, p, th, "  ", std::cout);
        if (witness && !verdict && n && weight(th) > *n)
            std::cout << "  formula weight " << weight(th) << " exceeds the bound " << *n << "\n";
    }
    return verdict ? kExitTrue : kExitFalse;
}

int report_relation(const Relation& r, const World& w, const char* kind, Family fam,
                    std::optional<unsigned> n, const std::string& pair_arg, bool witness,
                    const std::string& format) {
    const Lts& lts = w.env.lts;
    if (!pair_arg.empty()) {
        auto pq = split_pair(pair_arg);
        if (!pq) throw Error("--pair expects P,Q");
        StateId p = w.state_of_token(pq->first), q = w.state_of_token(pq->second);
        const bool related = r.contains(p, q);
        std::optional<Observable> wobs;
        if (!related && witness && n) wobs = distinguishing_observable(lts, p, q, fam, *n);
        if (format == "json") {
            nlohmann::json j{{"schema", "uptoind.relation.v1"},
                             {"kind", kind},
                             {"family", std::string(family_name(fam))},
                             {"pair", {lts.state_name(p), lts.state_name(q)}},
                             {"related", related}};
            if (n) j["n"] = *n;
            if (wobs) j["witness"] = print_formula(*wobs, lts);
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << (related ? "related" : "not related") << "\n";
            if (wobs)
                std::cout << "  " << lts.state_name(p) << " satisfies "
                          << print_formula(*wobs, lts) << ", " << lts.state_name(q)
                          << " does not\n";
        }
        return related ? kExitTrue : kExitFalse;
    }

    if (format == "json") {
        nlohmann::json j{{"schema", "uptoind.relation.v1"},
                         {"kind", kind},
                         {"family", std::string(family_name(fam))},
                         {"pairs", pairs_json(r, lts)}};
        if (n) j["n"] = *n;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << serialize_rel(r, lts);
    }
    return kExitTrue;
}

int run_lint(const Inputs& in, const std::string& rel_path, const std::string& formula,
             const std::string& upto_text) {
    // Parses every supplied input and reports per-input diagnostics.
    int problems = 0;
    std::optional<World> world;
    auto item = [&](const std::string& label, auto&& fn) {
        try {
            std::string note = fn();
            std::cout << "ok: " << label << (note.empty() ? "" : " (" + note + ")") << "\n";
        } catch (const std::exception& e) {
            std::cout << "error: " << label << ": " << e.what() << "\n";
            ++problems;
        }
    };

    if (!in.lts_path.empty() || !in.ccs_path.empty()) {
        const std::string label = in.ccs_path.empty() ? in.lts_path : in.ccs_path;
        item(label, [&] {
            world = build_world(in, 1);
            const Lts& lts = world->env.lts;
            return std::to_string(lts.state_count()) + " states, " +
                   std::to_string(lts.transition_count()) + " transitions, " +
                   std::to_string(lts.action_count()) + " actions";
        });
    } else if (!in.ctx_bindings.empty()) {
        item("contexts", [&] {
            auto sets = load_context_sets(in);
            return std::to_string(sets.size()) + " context set(s)";
        });
    }
    if (!rel_path.empty())
        item(rel_path, [&] {
            if (!world) throw Error("needs --lts or --ccs to resolve states");
            Relation r = load_relation(rel_path, *world);
            return std::to_string(r.size()) + " pairs";
        });
    if (!formula.empty())
        item("formula", [&] {
            if (!world) throw Error("needs --lts or --ccs to resolve action labels");
            Observable th = parse_formula(formula, world->env.lts);
            return "weight " + std::to_string(weight(th));
        });
    if (!upto_text.empty())
        item("up-to term", [&] {
            UptoTerm t = parse_upto(upto_source(upto_text));
            return print_upto(t);
        });
    return problems ? kExitError : kExitTrue;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Behavioural preorders, their approximants, and up-to certificates"};
    app.require_subcommand(1);

    Inputs in;
    std::string family_str = "simulation";
    std::string format = "text";
    unsigned n_max = 8;
    std::optional<unsigned> n_opt;
    std::uint64_t seed = 0x75707431;
    bool witness = false;
    std::string rel_path, upto_text, pair_arg;
    std::string sat_lts, sat_state, sat_formula;
    std::string ccs_in, ccs_out = "-";

    auto add_system = [&](CLI::App* cmd, bool with_ccs = true) {
        cmd->add_option("--lts", in.lts_path, "System in .aut format");
        cmd->add_option("--lts2", in.lts2_path,
                        "Second system; loaded side by side with --lts");
        if (with_ccs)
            cmd->add_option("--ccs", in.ccs_path, "Process definitions (NAME = TERM per line)");
        cmd->add_option("--const", in.const_bindings,
                        "Named relation constant, NAME=PATH of a .rel file")
            ->type_name("NAME=PATH");
        cmd->add_option("--ctx", in.ctx_bindings,
                        "Named context set, NAME=PATH of a context file")
            ->type_name("NAME=PATH");
        cmd->add_option("--cap", in.powerset_cap,
                        "Macro-state cap for exact preorder computation")
            ->envname("UPTOIND_CAP");
        cmd->add_option("--state-cap", in.state_cap, "State cap for process unfolding");
    };
    auto add_family = [&](CLI::App* cmd) {
        cmd->add_option("--family", family_str,
                        "trace | failure | ready | failure-trace | ready-trace | simulation");
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format: text | json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    CLI::App* sat = app.add_subcommand("sat", "Does a state satisfy a formula?");
    sat->add_option("lts", sat_lts, "System in .aut format")->required();
    sat->add_option("state", sat_state, "State name or index")->required();
    sat->add_option("formula", sat_formula, "Observation formula")->required();
    sat->add_option("--lts2", in.lts2_path, "Second system; loaded side by side");
    sat->add_option("--n", n_opt, "Restrict to formulas of weight at most N");
    sat->add_flag("--witness", witness, "Show how the formula is satisfied");
    add_format(sat);

    CLI::App* approx = app.add_subcommand("approx", "Level-n approximant of a family preorder");
    add_system(approx);
    add_family(approx);
    unsigned approx_n = 0;
    approx->add_option("--n", approx_n, "Approximant level")->required();
    approx->add_option("--pair", pair_arg, "Query one pair P,Q instead of dumping all");
    approx->add_flag("--witness", witness,
                     "With --pair: print a distinguishing observation if unrelated");
    add_format(approx);

    CLI::App* pre = app.add_subcommand("preorder", "Exact family preorder");
    add_system(pre);
    add_family(pre);
    pre->add_option("--pair", pair_arg, "Query one pair P,Q instead of dumping all");
    pre->add_option("--witness-depth", n_opt,
                    "With --pair: search this deep for a distinguishing observation");
    add_format(pre);

    CLI::App* certify_cmd = app.add_subcommand("certify", "Certify a relation up to a function");
    add_system(certify_cmd);
    add_family(certify_cmd);
    certify_cmd->add_option("--rel", rel_path, "Candidate relation (.rel file)")->required();
    certify_cmd->add_option("--upto", upto_text, "Up-to term, e.g. 'union(id, ctx(C))'");
    certify_cmd->add_option("--nmax", n_max, "Level bound for bounded checks");
    certify_cmd->add_option("--seed", seed, "Seed for sampled checks");
    add_format(certify_cmd);

    CLI::App* wp = app.add_subcommand("check-wp",
                                      "Does a term preserve the family's approximant levels?");
    add_system(wp);
    add_family(wp);
    wp->add_option("--upto", upto_text, "Up-to term")->required();
    wp->add_option("--nmax", n_max, "Level bound");
    wp->add_option("--seed", seed, "Seed for sampled checks");
    add_format(wp);

    CLI::App* ccslts = app.add_subcommand("ccs-lts", "Unfold process definitions into .aut");
    ccslts->add_option("--in", ccs_in, "Process definitions (NAME = TERM per line)")->required();
    ccslts->add_option("--out", ccs_out, "Output .aut path, '-' for stdout");
    ccslts->add_option("--state-cap", in.state_cap, "State cap for process unfolding");
    add_format(ccslts);

    CLI::App* lint = app.add_subcommand("lint", "Parse and validate inputs");
    add_system(lint);
    lint->add_option("--rel", rel_path, "Relation file to validate");
    lint->add_option("--formula", sat_formula, "Observation formula to validate");
    lint->add_option("--upto", upto_text, "Up-to term to validate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (sat->parsed())
            return run_sat(sat_lts, in.lts2_path, sat_state, sat_formula, n_opt, witness,
                           format);

        if (approx->parsed()) {
            Family fam = family_of(family_str);
            World w = build_world(in, 1);
            Relation r = approximant(w.env.lts, fam, approx_n);
            return report_relation(r, w, "approximant", fam, approx_n, pair_arg, witness,
                                   format);
        }

        if (pre->parsed()) {
            Family fam = family_of(family_str);
            World w = build_world(in, 1);
            Relation r = preorder(w.env.lts, fam, w.env.powerset_cap);
            return report_relation(r, w, "preorder", fam, n_opt, pair_arg, n_opt.has_value(),
                                   format);
        }

        if (certify_cmd->parsed()) {
            Family fam = family_of(family_str);
            UptoTerm t = upto_text.empty() ? UptoTerm::id() : parse_upto(upto_source(upto_text));
            World w = build_world(in, ctx_depth(t) == 0 ? 1 : ctx_depth(t));
            Relation r = load_relation(rel_path, w);
            CheckOptions opts;
            opts.seed = seed;
            Certificate cert = certify(w.env, fam, r, t, n_max, opts);
            std::cout << (format == "json" ? cert.to_json(w.env.lts)
                                           : cert.to_text(w.env.lts));
            return cert.status == Certificate::Status::Accepted ? kExitTrue : kExitFalse;
        }

        if (wp->parsed()) {
            Family fam = family_of(family_str);
            UptoTerm t = parse_upto(upto_source(upto_text));
            World w = build_world(in, ctx_depth(t) == 0 ? 1 : ctx_depth(t));
            CheckOptions opts;
            opts.seed = seed;
            CheckReport rep = check_wp(t, fam, w.env, n_max, opts);
            std::cout << (format == "json" ? rep.to_json_lines() : rep.to_text());
            return rep.passed ? kExitTrue : kExitFalse;
        }

        if (ccslts->parsed()) {
            auto defs = parse_ccs_file(read_file(ccs_in));
            if (defs.empty()) throw Error("'" + ccs_in + "' defines no processes");
            std::vector<CcsTerm> seeds;
            for (auto& [name, term] : defs) seeds.push_back(term);
            SosResult sos = sos_lts(seeds, in.state_cap);
            const std::string aut = serialize_aut(sos.lts);
            if (ccs_out == "-") {
                std::cout << aut;
            } else {
                write_file(ccs_out, aut);
                if (format == "json") {
                    nlohmann::json j{{"schema", "uptoind.ccslts.v1"},
                                     {"out", ccs_out},
                                     {"states", sos.lts.state_count()},
                                     {"transitions", sos.lts.transition_count()},
                                     {"initial", sos.lts.state_name(sos.lts.initial())}};
                    std::cout << j.dump(2) << "\n";
                } else {
                    std::cout << sos.lts.state_count() << " states, "
                              << sos.lts.transition_count() << " transitions, initial "
                              << sos.lts.state_name(sos.lts.initial()) << "\n";
                }
            }
            return kExitTrue;
        }

        if (lint->parsed()) return run_lint(in, rel_path, sat_formula, upto_text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
