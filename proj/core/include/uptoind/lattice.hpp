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

#ifndef UPTOIND_LATTICE_HPP
#define UPTOIND_LATTICE_HPP

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "uptoind/relation.hpp"

namespace uptoind {

// The complete lattice of relations over a fixed state count: order is
// inclusion, join is union, meet is intersection.
Relation lattice_top(std::uint32_t dim);
Relation lattice_bottom(std::uint32_t dim);
Relation lattice_join(const std::vector<Relation>& rs, std::uint32_t dim);
Relation lattice_meet(const std::vector<Relation>& rs, std::uint32_t dim);

struct MeetResult;

// Decreasing chain x0 >= x1 >= ... starting at the full relation. Levels are
// produced lazily, memoized, and checked on every extension: x0 must be the
// full relation and each level must be contained in the previous one
// (ChainError otherwise). Copies share the memo; concurrent access is
// serialized internally.
//
// A chain may carry evidence for when it reaches its meet:
//   - plain: no claim; meets are upper bounds only.
//   - declared_stable: the builder asserts levels are constant from `index`
//     on (spot-checked on use).
//   - fixpoint_iteration: levels come from iterating a monotone function
//     from the top, so the first repeated level is the meet.
//   - with_known_meet: an exact meet is computable on demand.
// Independent of evidence, a level equal to the empty relation is always
// recognized as the meet.
class Chain {
public:
    using Generator = std::function<Relation(unsigned)>;

    static Chain plain(std::uint32_t dim, Generator gen);
    static Chain declared_stable(std::uint32_t dim, Generator gen, unsigned index);
    static Chain fixpoint_iteration(std::uint32_t dim, Generator gen);
    static Chain with_known_meet(std::uint32_t dim, Generator gen,
                                 std::function<Relation()> meet);

    std::uint32_t dim() const;
    const Relation& at(unsigned n) const;

    // Smallest level <= probe whose value is known (by this chain's
    // evidence) to equal the meet; nullopt when not established.
    std::optional<unsigned> stabilization_index(unsigned probe) const;

    // True when the chain can certify an exact meet at all (used to label
    // verdicts as total rather than bounded).
    bool has_meet_evidence() const;

private:
    struct Impl;
    explicit Chain(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<Impl> impl_;

    friend MeetResult meet_of_chain(const Chain& c, unsigned budget);
};

struct MeetResult {
    Relation value;
    bool exact;            // false: value is only an upper bound on the meet
    unsigned levels_used;  // how deep the chain was inspected
};

// Exact meet when the chain's evidence establishes it within `budget` levels
// (or an on-demand meet is available); otherwise the level-`budget` value
// tagged inexact.
MeetResult meet_of_chain(const Chain& c, unsigned budget);

// Endofunction on relations. `declared_monotone` routes checks through the
// one-inclusion-per-level characterizations; it is spot-checked on sampled
// pairs y ⊆ y' and a caught violation is a hard MonotonicityError.
struct RelEndo {
    std::string name;
    std::function<Relation(const Relation&)> fn;
    bool declared_monotone = false;

    Relation operator()(const Relation& r) const { return fn(r); }

    static RelEndo identity();
    static RelEndo constant(std::string name, Relation value);
};

// b after f, monotone when both are.
RelEndo compose(const RelEndo& b, const RelEndo& f);

// z ⊆ b(z).
bool is_post_fixed(const RelEndo& b, const Relation& z);

struct CheckOptions {
    unsigned samples_per_level = 64;   // raw-mode sample count (non-monotone functions)
    std::size_t exhaustive_limit = 4096;  // raw mode: enumerate all subsets up to this many
    unsigned monotonicity_probes = 8;
    std::uint64_t seed = 0x75707431;
};

enum class CheckMode { Monotone, RawExhaustive, RawSampled };

struct LevelVerdict {
    unsigned level;
    bool ok;
    std::size_t checked_subsets;
    std::optional<std::pair<StateId, StateId>> witness;  // a pair that landed outside the target
};

// Result of check_valid / check_ap / check_wp. The verdict is bounded by
// n_max; it upgrades to total only when the chain stabilizes within the
// bound, because beyond stabilization every level repeats a checked one.
struct CheckReport {
    std::string function_name;
    std::string property;  // "valid", "ap" or "wp"
    unsigned n_max = 0;
    CheckMode mode = CheckMode::Monotone;
    bool passed = false;
    bool total = false;
    std::optional<unsigned> stabilization_index;
    std::vector<LevelVerdict> levels;

    std::string to_text() const;
    std::string to_json_lines() const;
};

// Valid for the chain: y ⊆ x_n implies b(y) ⊆ x_{n+1}, for n <= n_max.
// Monotone b is checked by b(x_n) ⊆ x_{n+1} per level; otherwise the raw
// condition is checked over all subsets of x_n when few enough, else over
// x_n itself plus sampled subsets.
CheckReport check_valid(const RelEndo& b, const Chain& c, unsigned n_max,
                        const CheckOptions& opts = {});

// Approximation-preserving: y ⊆ x_n implies f(y) ⊆ x_n. Same routing.
CheckReport check_ap(const RelEndo& f, const Chain& c, unsigned n_max,
                     const CheckOptions& opts = {});

struct BelowMeetStep {
    unsigned level;
    bool z_below_level;
    bool bz_below_next;
};

// Replay of the post-fixed-point argument for z against the chain.
struct BelowMeetReport {
    bool certified = false;
    unsigned n_max = 0;
    std::string failure;  // which hypothesis broke, empty when certified
    std::optional<std::pair<StateId, StateId>> witness;
    std::vector<BelowMeetStep> steps;

    std::string to_text() const;
    std::string to_json_lines() const;
};

// Preconditions: b checks valid for c up to n_max, and z ⊆ b(z). Then
// z ⊆ x_{n+1} follows from z ⊆ b(z) ⊆ x_{n+1} at each level; the report
// logs both inclusions per level.
BelowMeetReport certify_below_meet(const RelEndo& b, const Relation& z, const Chain& c,
                                   unsigned n_max, const CheckOptions& opts = {});

}  // namespace uptoind

#endif
