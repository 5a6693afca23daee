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

#ifndef UPTOIND_UPTO_HPP
#define UPTOIND_UPTO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uptoind/ccs.hpp"
#include "uptoind/lattice.hpp"
#include "uptoind/spectrum.hpp"

namespace uptoind {

// Combinator language for functions on relations:
//   id                   the relation itself
//   const(NAME)          a named relation, ignoring the argument
//   pre(FAMILY)          the family preorder on both sides of the argument
//   comp(t, t)           function composition, left applied last
//   union(t, ...)        pointwise union
//   chain(t, t)          relational composition of the two images
//   star(t)              reflexive-transitive closure of the image
//   ctx(NAME)            closure of the argument under a named context set
class UptoTerm {
public:
    enum class Kind { Id, Const, Comp, Union, Chain2, Star, Pre, Ctx };

    static UptoTerm id();
    static UptoTerm constant(std::string name);
    static UptoTerm comp(UptoTerm f, UptoTerm g);
    static UptoTerm union_of(std::vector<UptoTerm> parts);  // at least one
    static UptoTerm chain2(UptoTerm f, UptoTerm g);
    static UptoTerm star(UptoTerm f);
    static UptoTerm pre(Family fam);
    static UptoTerm ctx(std::string name);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }  // Const and Ctx
    Family fam() const { return fam_; }                // Pre
    const std::vector<UptoTerm>& children() const { return children_; }

private:
    UptoTerm() = default;

    Kind kind_ = Kind::Id;
    std::string name_;
    Family fam_ = Family::Trace;
    std::vector<UptoTerm> children_;
};

UptoTerm parse_upto(const std::string& text);
std::string print_upto(const UptoTerm& t);

// Everything an up-to term may refer to. `refl`, `top` and `empty` are
// always resolvable (identity, full and empty relation); other constants
// and context sets are supplied by the caller. When the system was unfolded
// from process terms, state_terms and state_ids carry the state-term
// correspondence that ctx() needs.
struct UptoEnv {
    Lts lts;
    std::map<std::string, Relation> constants;
    std::map<std::string, std::vector<CcsTerm>> contexts;
    std::vector<CcsTerm> state_terms;
    std::map<CcsTerm, StateId> state_ids;
    std::size_t powerset_cap = kDefaultPowersetCap;

    static UptoEnv for_lts(Lts lts);
    static UptoEnv for_processes(SosResult sos);

    Relation resolve_constant(const std::string& name) const;
    const std::vector<CcsTerm>& resolve_contexts(const std::string& name) const;

    // The family's exact preorder over this system, computed once.
    const Relation& preorder_of(Family fam) const;

private:
    mutable std::map<Family, Relation> preorder_cache_;
};

// Evaluates the term at r. Context closure is computed through the process
// terms behind the states; a closed pair whose terms fall outside the
// unfolded state space is dropped, which only ever shrinks the result and
// so never breaks soundness of a certificate built on it.
Relation eval_upto(const UptoTerm& t, const Relation& r, const UptoEnv& env);

// The term as a checkable endofunction. Every combinator is monotone in its
// argument, so the endo is declared monotone. The endo borrows env; keep the
// environment alive while the endo is in use.
RelEndo to_endo(const UptoTerm& t, const UptoEnv& env);

// How many nested context applications the term can perform, as a seeding
// hint for unfolding: star over a context-bearing term is clamped to 3.
// Evaluation itself never needs the hint (out-of-space pairs are dropped).
unsigned ctx_depth(const UptoTerm& t);

// Derives "every approximant level is preserved" from the shape of the
// term alone, when possible: id, the family's own preorder closure, and
// constants below the preorder preserve levels, and composition, union,
// relational chaining and star inherit it. Context closure is never
// derivable this way and must be checked against the chain. Returns the
// derivation, one line per step, or nothing.
std::optional<std::vector<std::string>> structurally_wp(const UptoTerm& t, Family fam,
                                                        const UptoEnv& env);

// Bounded check that the term preserves the family's approximants: its
// image at each level stays inside that level, up to n_max.
CheckReport check_wp(const UptoTerm& t, Family fam, const UptoEnv& env, unsigned n_max,
                     const CheckOptions& opts = {});

}  // namespace uptoind

#endif
