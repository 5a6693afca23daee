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

#ifndef UPTOIND_CERTIFY_HPP
#define UPTOIND_CERTIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "uptoind/spectrum.hpp"
#include "uptoind/upto.hpp"

namespace uptoind {

struct SemiProgressWitness {
    StateId p;
    StateId q;
    ActionId action;
    StateId p_succ;  // the move of p that q cannot match into s
};

// Does every pair of r transfer every transition into s? For each (p, q) in
// r and each move p -a-> p', q must offer q -a-> q' with (p', q') in s.
// Returns the first failure, or nothing when r progresses to s.
std::optional<SemiProgressWitness> semi_progress(const Lts& lts, const Relation& r,
                                                 const Relation& s);

// One step of the family functional: (p, q) is kept when every transition
// of p is matched by q into r and every family atom satisfied by p is
// satisfied by q.
Relation s_theta(const Lts& lts, Family fam, const Relation& r);

// One transition-matching obligation, as recorded in a certificate.
struct ProgressObligation {
    StateId p;
    StateId q;
    ActionId action;
    StateId p_succ;
    std::optional<StateId> q_succ;  // a matching derivative, absent on failure
};

// Outcome of an up-to certification run. An accepted certificate means the
// relation is contained in the family preorder: the relation is then a
// post-fixed point of the family functional composed with the up-to term,
// that composite maps each approximant level into the next, and a
// post-fixed point of such a function lies below every level. The inductive
// replay of that argument is stored in below_meet. Rejection carries no
// converse claim: the method is sound, not complete, so a rejected relation
// may still be contained in the preorder.
struct Certificate {
    enum class Status { Accepted, Rejected };

    Status status = Status::Rejected;
    // Accepted with total=true claims containment in the preorder itself;
    // total=false limits the claim to the approximant levels that were
    // checked (the up-to term preserved them only up to the bound).
    bool total = false;
    Family family = Family::Trace;
    Relation relation;
    std::string upto_text;
    unsigned n_max = 0;

    std::optional<ComplianceWitness> compliance_failure;
    std::vector<ProgressObligation> obligations;
    std::optional<SemiProgressWitness> progress_failure;

    bool wp_structural = false;
    std::vector<std::string> wp_derivation;   // structural route
    std::optional<CheckReport> wp_report;     // bounded route
    std::optional<BelowMeetReport> below_meet;

    std::string rejection_reason;             // empty when accepted
    std::vector<std::string> derivation;      // the argument, one line per step

    std::string to_text(const Lts& lts) const;
    std::string to_json(const Lts& lts) const;
};

// Runs the full gate on r with the up-to term t: family atom compliance on
// r, transition progression of r into the evaluated image, and level
// preservation of t (derived structurally when possible, otherwise checked
// against the approximant chain up to n_max). Accepted only when every
// check passes; the first failure rejects with its witness. An accepted run
// finishes by replaying the per-level containment proof and records it.
Certificate certify(const UptoEnv& env, Family fam, const Relation& r, const UptoTerm& t,
                    unsigned n_max, const CheckOptions& opts = {});

}  // namespace uptoind

#endif
