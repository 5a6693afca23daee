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

#ifndef UPTOIND_OBSERVABLE_HPP
#define UPTOIND_OBSERVABLE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "uptoind/lts.hpp"

namespace uptoind {

// Local atomic observable: every action in `must` is enabled and every action
// in `must_not` is refused. Both sets are sorted, deduped and disjoint.
struct AtomicObs {
    std::vector<ActionId> must;
    std::vector<ActionId> must_not;

    AtomicObs() = default;
    AtomicObs(std::vector<ActionId> must_, std::vector<ActionId> must_not_);

    bool operator==(const AtomicObs&) const = default;
};

// Positive observation formula: atoms, action diamonds, finite conjunction.
// The empty conjunction is `tt`.
class Observable {
public:
    enum class Kind { Atom, Diamond, Conj };

    static Observable top() { return conj({}); }
    static Observable atom(AtomicObs o);
    static Observable refusal(ActionId a) { return atom(AtomicObs({}, {a})); }
    static Observable diamond(ActionId a, Observable body);
    static Observable conj(std::vector<Observable> children);

    Kind kind() const { return kind_; }
    bool is_top() const { return kind_ == Kind::Conj && children_.empty(); }
    const AtomicObs& atom_obs() const { return atom_; }
    ActionId action() const { return action_; }
    const Observable& body() const { return children_.front(); }
    const std::vector<Observable>& children() const { return children_; }

    bool operator==(const Observable& other) const { return compare(*this, other) == 0; }
    bool operator<(const Observable& other) const { return compare(*this, other) < 0; }

    // Total order: by kind, then by the kind's payload, children lexicographic.
    static int compare(const Observable& a, const Observable& b);

private:
    Observable() = default;

    Kind kind_ = Kind::Conj;
    ActionId action_ = 0;
    AtomicObs atom_;
    std::vector<Observable> children_;  // Diamond: the single body; Conj: all children
};

// `ready(X)` as an atom: X enabled, everything else refused.
Observable ready_atom(std::vector<ActionId> ready_set, std::uint32_t alphabet_size);

// Diamond nesting depth: atoms and tt weigh 0, conjunction takes the max.
unsigned weight(const Observable& theta);

// Stratification depth used by the approximants: like weight, except an atom
// counts as one observation.
unsigned observation_depth(const Observable& theta);

bool sat(const Lts& lts, StateId p, const Observable& theta);

// sat restricted to observables of weight <= n.
bool sat_n(const Lts& lts, StateId p, const Observable& theta, unsigned n);

// Sorts and dedupes conjunction children recursively; a conjunction left
// with one child collapses to that child.
Observable canonical(const Observable& theta);

// Smallest superset closed under taking diamond bodies and conjunction
// children. Output is sorted and deduped.
std::vector<Observable> downward_close(const std::vector<Observable>& thetas);

// Grammar:  tt | <label> phi | and(phi, ..., phi) | ref(label)
//         | ready({label, ...}) | loc({label, ...}; {label, ...})
// Labels must exist in the system's alphabet. `line_no` seeds error positions.
Observable parse_formula(const std::string& text, const Lts& lts, std::size_t line_no = 1);
std::string print_formula(const Observable& theta, const Lts& lts);

// One formula per line; '#' starts a comment. Returns (line number, formula).
std::vector<std::pair<std::size_t, Observable>> parse_obs_file(const std::string& text,
                                                               const Lts& lts);

}  // namespace uptoind

#endif
