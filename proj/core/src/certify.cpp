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

#include "uptoind/certify.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "uptoind/errors.hpp"

namespace uptoind {

namespace {

bool includes_sorted(const std::vector<ActionId>& big, const std::vector<ActionId>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Pairs that transfer every family atom from left to right. For the failure
// families that is en(q) ⊆ en(p); the ready families need equality; Trace
// and Simulation have no atoms.
Relation atom_transfer(const Lts& lts, Family fam) {
    const std::uint32_t dim = lts.state_count();
    if (fam == Family::Trace || fam == Family::Simulation) return Relation::full(dim);

    const bool exact = fam == Family::Ready || fam == Family::ReadyTrace;
    Relation out(dim);
    for (StateId p = 0; p < dim; ++p) {
        const auto& en_p = lts.enabled(p);
        for (StateId q = 0; q < dim; ++q) {
            const auto& en_q = lts.enabled(q);
            const bool ok = exact ? en_p == en_q : includes_sorted(en_p, en_q);
            if (ok) out.add(p, q);
        }
    }
    return out;
}

const char* status_word(Certificate::Status s) {
    return s == Certificate::Status::Accepted ? "accepted" : "rejected";
}

}  // namespace

std::optional<SemiProgressWitness> semi_progress(const Lts& lts, const Relation& r,
                                                 const Relation& s) {
    if (r.dim() != lts.state_count() || s.dim() != lts.state_count())
        throw Error("relation dimension does not match the system");

    std::optional<SemiProgressWitness> found;
    r.for_each([&](StateId p, StateId q) {
        if (found) return;
        for (ActionId a : lts.enabled(p)) {
            for (StateId ps : lts.successors(p, a)) {
                bool matched = false;
                for (StateId qs : lts.successors(q, a))
                    if (s.contains(ps, qs)) {
                        matched = true;
                        break;
                    }
                if (!matched) {
                    found = SemiProgressWitness{p, q, a, ps};
                    return;
                }
            }
        }
    });
    return found;
}

Relation s_theta(const Lts& lts, Family fam, const Relation& r) {
    return simulation_step(lts, r) & atom_transfer(lts, fam);
}

Certificate certify(const UptoEnv& env, Family fam, const Relation& r, const UptoTerm& t,
                    unsigned n_max, const CheckOptions& opts) {
    const Lts& lts = env.lts;
    if (r.dim() != lts.state_count())
        throw Error("relation dimension does not match the environment's system");

    Certificate cert;
    cert.family = fam;
    cert.relation = r;
    cert.upto_text = print_upto(t);
    cert.n_max = n_max;

    const std::string fname(family_name(fam));
    cert.derivation.push_back("goal: every pair of the relation lies in the " + fname +
                              " preorder");
    cert.derivation.push_back("relation: " + std::to_string(r.size()) + " pairs over " +
                              std::to_string(lts.state_count()) + " states");

    // Atom compliance on the relation itself.
    if (auto cv = compliance_violation(lts, r, fam)) {
        cert.compliance_failure = std::move(cv);
        cert.rejection_reason = "pair (" + lts.state_name(cert.compliance_failure->p) + ", " +
                                lts.state_name(cert.compliance_failure->q) +
                                ") does not transfer the atomic observation " +
                                print_formula(cert.compliance_failure->atom, lts);
        cert.derivation.push_back("atom compliance: FAILED, " + cert.rejection_reason);
        return cert;
    }
    switch (fam) {
        case Family::Trace:
        case Family::Simulation:
            cert.derivation.push_back("atom compliance: nothing to check for " + fname);
            break;
        case Family::Failure:
        case Family::FailureTrace:
            cert.derivation.push_back(
                "atom compliance: every pair transfers refusal observations left to right");
            break;
        case Family::Ready:
        case Family::ReadyTrace:
            cert.derivation.push_back(
                "atom compliance: related states enable exactly the same actions");
            break;
    }

    // The progression target is the term's image of the relation.
    const Relation image = eval_upto(t, r, env);
    cert.derivation.push_back("image: " + cert.upto_text + " applied to the relation has " +
                              std::to_string(image.size()) + " pairs");

    // Transition progression of r into the image, every move recorded.
    bool progressed = true;
    r.for_each([&](StateId p, StateId q) {
        if (!progressed) return;
        for (ActionId a : lts.enabled(p)) {
            for (StateId ps : lts.successors(p, a)) {
                ProgressObligation ob{p, q, a, ps, std::nullopt};
                for (StateId qs : lts.successors(q, a))
                    if (image.contains(ps, qs)) {
                        ob.q_succ = qs;
                        break;
                    }
                const bool ok = ob.q_succ.has_value();
                cert.obligations.push_back(ob);
                if (!ok) {
                    cert.progress_failure = SemiProgressWitness{p, q, a, ps};
                    progressed = false;
                    return;
                }
            }
        }
    });
    if (!progressed) {
        const auto& w = *cert.progress_failure;
        cert.rejection_reason = "pair (" + lts.state_name(w.p) + ", " + lts.state_name(w.q) +
                                "): the move " + lts.state_name(w.p) + " -" +
                                lts.action_label(w.action) + "-> " + lts.state_name(w.p_succ) +
                                " has no matching move into the image";
        cert.derivation.push_back("progression: FAILED, " + cert.rejection_reason);
        return cert;
    }
    cert.derivation.push_back("progression: all " + std::to_string(cert.obligations.size()) +
                              " transition obligations discharged into the image");

    // The term must keep every approximant level inside itself; derive that
    // from its shape when possible, check it against the chain otherwise.
    if (auto deriv = structurally_wp(t, fam, env)) {
        cert.wp_structural = true;
        cert.wp_derivation = std::move(*deriv);
        cert.total = true;
        cert.derivation.push_back(
            "level preservation: established from the shape of the function");
    } else {
        CheckReport rep = check_wp(t, fam, env, n_max, opts);
        const bool passed = rep.passed;
        const bool total = rep.total;
        cert.wp_report = std::move(rep);
        if (!passed) {
            cert.rejection_reason =
                "the function does not preserve approximant level " +
                std::to_string(cert.wp_report->levels.empty()
                                   ? n_max
                                   : cert.wp_report->levels.back().level);
            cert.derivation.push_back("level preservation: FAILED, " + cert.rejection_reason);
            return cert;
        }
        cert.total = total;
        cert.derivation.push_back(total
                                      ? "level preservation: checked, and the chain "
                                        "stabilizes within the bound, so every level is covered"
                                      : "level preservation: checked up to level " +
                                            std::to_string(n_max) + " (bounded)");
    }

    // Replay the containment proof: the relation is a post-fixed point of
    // one-step-after-the-function, and that composite maps each level into
    // the next, so the relation sits below every level.
    Chain chain = approximant_chain(lts, fam, env.powerset_cap);
    RelEndo f = to_endo(t, env);
    RelEndo step{"one-step[" + fname + "]",
                 [&lts, fam](const Relation& y) { return s_theta(lts, fam, y); }, true};
    BelowMeetReport replay = certify_below_meet(compose(step, f), r, chain, n_max, opts);
    if (!replay.certified)
        throw std::logic_error(
            "certificate replay failed after all component checks passed: " + replay.failure);
    cert.below_meet = std::move(replay);
    cert.derivation.push_back("replay: containment verified level by level through level " +
                              std::to_string(n_max + 1));
    cert.derivation.push_back(
        cert.total ? "conclusion: the relation is contained in the " + fname + " preorder"
                   : "conclusion: the relation is contained in every " + fname +
                         " approximant through level " + std::to_string(n_max + 1));

    cert.status = Certificate::Status::Accepted;
    return cert;
}

std::string Certificate::to_text(const Lts& lts) const {
    std::ostringstream os;
    os << "up-to certificate: " << status_word(status);
    if (status == Status::Accepted) os << (total ? " (total)" : " (bounded)");
    os << "\n";
    os << "  family:   " << family_name(family) << "\n";
    os << "  function: " << upto_text << "\n";
    os << "  relation:";
    for (auto [p, q] : relation.pairs())
        os << " (" << lts.state_name(p) << ", " << lts.state_name(q) << ")";
    os << "\n";
    for (const auto& line : derivation) os << "  " << line << "\n";
    if (compliance_failure) {
        const auto& w = *compliance_failure;
        os << "  compliance failure: (" << lts.state_name(w.p) << ", " << lts.state_name(w.q)
           << ") on " << print_formula(w.atom, lts) << "\n";
    }
    if (progress_failure) {
        const auto& w = *progress_failure;
        os << "  unmatched move: " << lts.state_name(w.p) << " -" << lts.action_label(w.action)
           << "-> " << lts.state_name(w.p_succ) << " against " << lts.state_name(w.q) << "\n";
    }
    if (!obligations.empty() && status == Status::Accepted) {
        os << "  obligations:\n";
        for (const auto& ob : obligations) {
            os << "    (" << lts.state_name(ob.p) << ", " << lts.state_name(ob.q) << "): "
               << lts.state_name(ob.p) << " -" << lts.action_label(ob.action) << "-> "
               << lts.state_name(ob.p_succ) << "  matched by  " << lts.state_name(ob.q) << " -"
               << lts.action_label(ob.action) << "-> "
               << (ob.q_succ ? lts.state_name(*ob.q_succ) : std::string("(none)")) << "\n";
        }
    }
    if (wp_structural) {
        os << "  level preservation, by the shape of the function:\n";
        for (const auto& line : wp_derivation) os << "    " << line << "\n";
    } else if (wp_report) {
        std::istringstream body(wp_report->to_text());
        for (std::string line; std::getline(body, line);) os << "    " << line << "\n";
    }
    if (below_meet) {
        std::istringstream body(below_meet->to_text());
        for (std::string line; std::getline(body, line);) os << "    " << line << "\n";
    }
    return os.str();
}

std::string Certificate::to_json(const Lts& lts) const {
    nlohmann::json j;
    j["schema"] = "uptoind.certificate.v1";
    j["status"] = status_word(status);
    j["total"] = total;
    j["family"] = std::string(family_name(family));
    j["function"] = upto_text;
    j["n_max"] = n_max;

    auto rel = nlohmann::json::array();
    for (auto [p, q] : relation.pairs())
        rel.push_back({lts.state_name(p), lts.state_name(q)});
    j["relation"] = std::move(rel);

    if (compliance_failure) {
        const auto& w = *compliance_failure;
        j["compliance_failure"] = {{"p", lts.state_name(w.p)},
                                   {"q", lts.state_name(w.q)},
                                   {"atom", print_formula(w.atom, lts)}};
    }
    auto obs = nlohmann::json::array();
    for (const auto& ob : obligations) {
        nlohmann::json o{{"p", lts.state_name(ob.p)},
                         {"q", lts.state_name(ob.q)},
                         {"action", lts.action_label(ob.action)},
                         {"p_succ", lts.state_name(ob.p_succ)}};
        if (ob.q_succ) o["q_succ"] = lts.state_name(*ob.q_succ);
        obs.push_back(std::move(o));
    }
    j["obligations"] = std::move(obs);
    if (progress_failure) {
        const auto& w = *progress_failure;
        j["progress_failure"] = {{"p", lts.state_name(w.p)},
                                 {"q", lts.state_name(w.q)},
                                 {"action", lts.action_label(w.action)},
                                 {"p_succ", lts.state_name(w.p_succ)}};
    }

    nlohmann::json wp;
    if (wp_structural) {
        wp["route"] = "structural";
        wp["derivation"] = wp_derivation;
    } else if (wp_report) {
        wp["route"] = "checked";
        wp["passed"] = wp_report->passed;
        wp["total"] = wp_report->total;
        wp["n_max"] = wp_report->n_max;
    } else {
        wp["route"] = "not reached";
    }
    j["level_preservation"] = std::move(wp);

    if (below_meet)
        j["replay"] = {{"certified", below_meet->certified},
                       {"n_max", below_meet->n_max},
                       {"levels", below_meet->steps.size()}};
    if (!rejection_reason.empty()) j["rejection_reason"] = rejection_reason;
    j["derivation"] = derivation;
    return j.dump(2) + "\n";
}

}  // namespace uptoind
