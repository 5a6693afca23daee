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

#ifndef UPTOIND_SPECTRUM_HPP
#define UPTOIND_SPECTRUM_HPP

#include <array>
#include <optional>
#include <string_view>

#include "uptoind/lattice.hpp"
#include "uptoind/observable.hpp"
#include "uptoind/relation.hpp"

namespace uptoind {

// The observation languages whose induced preorders this library decides.
enum class Family { Trace, Failure, Ready, FailureTrace, ReadyTrace, Simulation };

constexpr std::array<Family, 6> all_families{Family::Trace,        Family::Failure,
                                             Family::Ready,        Family::FailureTrace,
                                             Family::ReadyTrace,   Family::Simulation};

std::string_view family_name(Family fam);
std::optional<Family> parse_family(std::string_view name);

struct ObsFamily {
    Family kind;
    std::uint32_t alphabet_size;

    ObsFamily(Family k, const Lts& lts) : kind(k), alphabet_size(lts.action_count()) {}
    ObsFamily(Family k, std::uint32_t alpha) : kind(k), alphabet_size(alpha) {}
};

// Formula languages, all downward closed:
//   Trace:        tt | <mu> theta
//   Failure:      tt | <mu> theta | R          (terminal refusal)
//   Ready:        tt | <mu> theta | X          (terminal ready set)
//   FailureTrace: tt | <mu> theta | R | R and <mu> theta
//   ReadyTrace:   tt | <mu> theta | X | X and <mu> theta
//   Simulation:   tt | <mu> theta | and(theta, ...)   (no atoms)
// where R is a refusal observation (an atom with an empty must set, or a
// conjunction of such atoms) and X is an exact ready-set atom (must and
// must-not partition the alphabet). Both spellings of a multi-action refusal
// (one set atom, or a conjunction of single refusals) are accepted.
bool family_member(const ObsFamily& fam, const Observable& theta);

// Exhaustive stream of family members in canonical form, weight bounded by
// max_weight and every conjunction at most max_conj_width wide. Refusal and
// ready observations are emitted as single set atoms (the canonical spelling
// of a conjunction of refusals), so width never limits which action sets
// appear. Throws CapExceeded when more than `cap` formulas would be emitted.
std::vector<Observable> enumerate_family(const ObsFamily& fam, unsigned max_weight,
                                         unsigned max_conj_width, std::size_t cap = 200000);

// The n-indexed approximant: relates p to q when every family observable of
// observation depth at most n satisfied by p is satisfied by q. Level 0 is
// the full relation; one atomic observation consumes one level, so refusal
// and ready checks become visible from level 1 and each diamond adds one.
Relation approximant(const Lts& lts, Family fam, unsigned n);

inline constexpr std::size_t kDefaultPowersetCap = 4096;

// The full preorder: the meet of the approximant chain. Simulation iterates
// its functional to the greatest fixed point; the trace-like families decide
// decorated-language inclusion by subset construction, capped at
// `powerset_cap` distinct macro sets (CapExceeded beyond, never a wrong
// answer; alphabets wider than 64 actions are likewise refused).
Relation preorder(const Lts& lts, Family fam, std::size_t powerset_cap = kDefaultPowersetCap);

// One simulation-functional step: p is related to q when every transition of
// p is matched by q into x.
Relation simulation_step(const Lts& lts, const Relation& x);

// The approximant sequence as a Chain, carrying the family's stabilization
// evidence: Simulation chains are functional iterations (first repeat is the
// meet), the trace-like families attach the exact preorder as a known meet.
// The Lts is copied into the chain, so it may outlive the argument.
Chain approximant_chain(const Lts& lts, Family fam,
                        std::size_t powerset_cap = kDefaultPowersetCap);

struct ComplianceWitness {
    StateId p;
    StateId q;
    Observable atom;
};

// Checks that every pair transfers the family's atomic observations from
// left to right (refusals for the failure families, exact ready sets for the
// ready families, nothing for Trace and Simulation). Returns a violating
// (p, q, atom) or nothing.
std::optional<ComplianceWitness> compliance_violation(const Lts& lts, const Relation& r,
                                                      Family fam);

// A family observable of weight (and observation depth) at most n satisfied
// by p but not q; absent exactly when (p,q) is in approximant(n). Witnesses
// are greedily minimized and re-verified before being returned.
std::optional<Observable> distinguishing_observable(const Lts& lts, StateId p, StateId q,
                                                    Family fam, unsigned n);

}  // namespace uptoind

#endif
