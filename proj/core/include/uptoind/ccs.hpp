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

#ifndef UPTOIND_CCS_HPP
#define UPTOIND_CCS_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uptoind/lts.hpp"

namespace uptoind {

// Finite process terms: no recursion, no restriction, no synchronization,
// so every term unfolds to a finite transition system. Hole leaves turn a
// term into a one-hole context.
class CcsTerm {
public:
    enum class Kind { Nil, Prefix, Sum, Par, Hole };

    static CcsTerm nil();
    static CcsTerm prefix(std::string action, CcsTerm body);
    static CcsTerm sum(std::vector<CcsTerm> children);  // at least two
    static CcsTerm par(std::vector<CcsTerm> children);  // at least two
    static CcsTerm hole();

    Kind kind() const { return kind_; }
    const std::string& action() const { return action_; }
    const CcsTerm& body() const { return children_.front(); }
    const std::vector<CcsTerm>& children() const { return children_; }

    std::size_t hole_count() const;

    bool operator==(const CcsTerm& other) const { return compare(*this, other) == 0; }
    bool operator<(const CcsTerm& other) const { return compare(*this, other) < 0; }
    static int compare(const CcsTerm& a, const CcsTerm& b);

private:
    CcsTerm() = default;

    Kind kind_ = Kind::Nil;
    std::string action_;
    std::vector<CcsTerm> children_;  // Prefix: the single body; Sum/Par: operands
};

// Grammar:  0 | a.P | P + P | P '|' P | ( P ) | []
// `.` binds tightest, then `+`, then `|`. Action names are identifiers.
// `line_no` seeds error positions.
CcsTerm parse_ccs(const std::string& text, std::size_t line_no = 1);

// Canonical text; parsing it back yields the same term up to sum and par
// associativity.
std::string print_ccs(const CcsTerm& t);

// Flattens nested sums and pars and sorts their operands, keeping
// duplicates. Two terms denote the same process state exactly when their
// normal forms are equal.
CcsTerm normal_form(const CcsTerm& t);

// Plugs `arg` into the unique hole. The context must have exactly one hole
// and the argument none.
CcsTerm subst_hole(const CcsTerm& ctx, const CcsTerm& arg);

// `NAME = TERM` per line; '#' starts a comment. Order preserved, duplicate
// names rejected.
std::vector<std::pair<std::string, CcsTerm>> parse_ccs_file(const std::string& text);

struct SosResult {
    Lts lts;
    std::vector<CcsTerm> state_terms;       // normal forms, indexed by state
    std::map<CcsTerm, StateId> state_ids;   // normal form -> state

    std::optional<StateId> state_of(const CcsTerm& t) const;
};

// Unfolds the seeds under the standard rules: a prefix fires its action, a
// sum fires either operand, parallel operands interleave. States are
// distinct reachable normal forms, named by their printed terms; the first
// seed becomes the initial state. Throws CapExceeded past `state_cap`.
SosResult sos_lts(const std::vector<CcsTerm>& seeds, std::size_t state_cap = 10000);

// {(C[p], C[q]) | (p, q) in r, C in contexts} together with r itself.
std::vector<std::pair<CcsTerm, CcsTerm>> ctx_closure(
    const std::vector<std::pair<CcsTerm, CcsTerm>>& r, const std::vector<CcsTerm>& contexts);

}  // namespace uptoind

#endif
