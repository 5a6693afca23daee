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

#ifndef UPTOIND_TESTS_GENERATORS_HPP
#define UPTOIND_TESTS_GENERATORS_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "uptoind/ccs.hpp"
#include "uptoind/lts.hpp"
#include "uptoind/observable.hpp"
#include "uptoind/relation.hpp"
#include "uptoind/upto.hpp"

namespace uptoind::testgen {

inline std::mt19937_64 rng_for(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::uint32_t pick(std::mt19937_64& rng, std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
}

inline bool chance(std::mt19937_64& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// Random system with 1..max_states states over a 1..max_actions alphabet.
// Out-degree per (state, action) is mostly 0 or 1 with occasional branching,
// which keeps the corpus away from both all-deadlock and all-full systems.
inline Lts random_lts(std::mt19937_64& rng, std::uint32_t max_states = 5,
                      std::uint32_t max_actions = 3) {
    static const std::vector<std::string> labels{"a", "b", "c", "d"};
    const std::uint32_t ns = pick(rng, 1, max_states);
    const std::uint32_t na = pick(rng, 1, max_actions);
    std::vector<std::string> alphabet(labels.begin(), labels.begin() + na);

    std::vector<std::tuple<StateId, ActionId, StateId>> trans;
    for (StateId s = 0; s < ns; ++s) {
        for (ActionId a = 0; a < na; ++a) {
            std::uint32_t out = 0;
            const double roll = std::uniform_real_distribution<double>(0, 1)(rng);
            if (roll < 0.40) out = 0;
            else if (roll < 0.80) out = 1;
            else if (roll < 0.95) out = 2;
            else out = 3;
            out = std::min(out, ns);
            std::vector<StateId> targets(ns);
            for (StateId t = 0; t < ns; ++t) targets[t] = t;
            std::shuffle(targets.begin(), targets.end(), rng);
            for (std::uint32_t k = 0; k < out; ++k) trans.emplace_back(s, a, targets[k]);
        }
    }
    return Lts(ns, std::move(alphabet), trans);
}

// Every pair present independently with probability `density`.
inline Relation random_relation(std::mt19937_64& rng, std::uint32_t dim, double density) {
    Relation r(dim);
    for (StateId p = 0; p < dim; ++p)
        for (StateId q = 0; q < dim; ++q)
            if (chance(rng, density)) r.add(p, q);
    return r;
}

// A random subset of `base`, each pair kept with probability `keep`.
inline Relation random_subrelation(std::mt19937_64& rng, const Relation& base, double keep) {
    Relation r(base.dim());
    base.for_each([&](StateId p, StateId q) {
        if (chance(rng, keep)) r.add(p, q);
    });
    return r;
}

// Random observable over the system's alphabet, diamond depth at most
// `depth`. All node kinds appear, including set atoms.
inline Observable random_observable(std::mt19937_64& rng, const Lts& lts, unsigned depth) {
    const std::uint32_t na = lts.action_count();
    const std::uint32_t roll = pick(rng, 0, depth == 0 ? 2 : 5);
    switch (roll) {
        case 0:
            return Observable::top();
        case 1:
            return Observable::refusal(pick(rng, 0, na - 1));
        case 2: {
            // disjoint must / must-not sets
            std::vector<ActionId> must, must_not;
            for (ActionId a = 0; a < na; ++a) {
                const auto r3 = pick(rng, 0, 2);
                if (r3 == 0) must.push_back(a);
                else if (r3 == 1) must_not.push_back(a);
            }
            return Observable::atom(AtomicObs(std::move(must), std::move(must_not)));
        }
        case 3:
        case 4:
            return Observable::diamond(pick(rng, 0, na - 1),
                                       random_observable(rng, lts, depth - 1));
        default: {
            std::vector<Observable> kids;
            const auto width = pick(rng, 2, 3);
            for (std::uint32_t i = 0; i < width; ++i)
                kids.push_back(random_observable(rng, lts, depth - 1));
            return Observable::conj(std::move(kids));
        }
    }
}

// Random process term, prefix depth at most `depth`. With_hole adds hole
// leaves (for context round-trips); at most one per term is not enforced
// here, callers that need a context filter on hole_count().
inline CcsTerm random_ccs(std::mt19937_64& rng, unsigned depth, bool with_hole = false) {
    static const std::vector<std::string> acts{"a", "b", "c"};
    const std::uint32_t roll = pick(rng, 0, depth == 0 ? (with_hole ? 1 : 0) : 5);
    switch (roll) {
        case 0:
            return CcsTerm::nil();
        case 1:
            if (with_hole) return CcsTerm::hole();
            [[fallthrough]];
        case 2:
        case 3:
            return CcsTerm::prefix(acts[pick(rng, 0, 2)], random_ccs(rng, depth - 1, with_hole));
        case 4: {
            std::vector<CcsTerm> kids;
            const auto width = pick(rng, 2, 3);
            for (std::uint32_t i = 0; i < width; ++i)
                kids.push_back(random_ccs(rng, depth - 1, with_hole && i == 0));
            return CcsTerm::sum(std::move(kids));
        }
        default: {
            std::vector<CcsTerm> kids;
            for (std::uint32_t i = 0; i < 2; ++i)
                kids.push_back(random_ccs(rng, depth - 1, with_hole && i == 0));
            return CcsTerm::par(std::move(kids));
        }
    }
}

// Random up-to term. Constants are drawn from the always-resolvable names,
// pre() from all six families, so the result evaluates in any environment
// without extra bindings.
inline UptoTerm random_upto(std::mt19937_64& rng, unsigned depth) {
    static const std::vector<std::string> consts{"refl", "top", "empty"};
    const std::uint32_t roll = pick(rng, 0, depth == 0 ? 2 : 7);
    switch (roll) {
        case 0:
            return UptoTerm::id();
        case 1:
            return UptoTerm::constant(consts[pick(rng, 0, 2)]);
        case 2:
            return UptoTerm::pre(all_families[pick(rng, 0, 5)]);
        case 3:
            return UptoTerm::comp(random_upto(rng, depth - 1), random_upto(rng, depth - 1));
        case 4: {
            std::vector<UptoTerm> parts;
            const auto width = pick(rng, 1, 3);
            for (std::uint32_t i = 0; i < width; ++i)
                parts.push_back(random_upto(rng, depth - 1));
            return UptoTerm::union_of(std::move(parts));
        }
        case 5:
            return UptoTerm::chain2(random_upto(rng, depth - 1), random_upto(rng, depth - 1));
        case 6:
            return UptoTerm::star(random_upto(rng, depth - 1));
        default:
            return UptoTerm::ctx("C");
    }
}

// Injects harmless whitespace around single-character punctuation so the
// round-trip tests exercise more than the printer's own spacing.
inline std::string add_whitespace_noise(std::mt19937_64& rng, const std::string& text) {
    std::string out;
    for (char c : text) {
        const bool punct = c == '(' || c == ')' || c == ',' || c == '+' || c == '|' ||
                           c == '{' || c == '}' || c == ';';
        if (punct && chance(rng, 0.3)) out += ' ';
        out += c;
        if (punct && chance(rng, 0.3)) out += ' ';
    }
    return out;
}

}  // namespace uptoind::testgen

#endif
