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

#ifndef UPTOIND_LTS_HPP
#define UPTOIND_LTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "uptoind/errors.hpp"

namespace uptoind {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;

// Finite labelled transition system. States are dense indices, actions are
// indices into a label alphabet. Successor sets are kept sorted and deduped.
class Lts {
public:
    Lts() = default;

    Lts(std::uint32_t state_count,
        std::vector<std::string> alphabet,
        const std::vector<std::tuple<StateId, ActionId, StateId>>& transitions,
        StateId initial = 0,
        std::vector<std::string> state_names = {});

    std::uint32_t state_count() const { return state_count_; }
    std::uint32_t action_count() const { return static_cast<std::uint32_t>(alphabet_.size()); }
    std::size_t transition_count() const { return transition_count_; }
    StateId initial() const { return initial_; }

    const std::vector<std::string>& alphabet() const { return alphabet_; }
    const std::string& action_label(ActionId a) const { return alphabet_.at(a); }
    std::optional<ActionId> find_action(std::string_view label) const;

    const std::vector<StateId>& successors(StateId p, ActionId a) const;
    // Actions with at least one successor from p, ascending.
    const std::vector<ActionId>& enabled(StateId p) const;
    bool refuses(StateId p, ActionId a) const;
    std::uint32_t max_out_degree() const { return max_out_degree_; }

    // Optional display names, either empty or one per state.
    const std::vector<std::string>& state_names() const { return state_names_; }
    std::string state_name(StateId p) const;
    std::optional<StateId> find_state(std::string_view name) const;

    bool operator==(const Lts& other) const;

private:
    std::uint32_t state_count_ = 0;
    StateId initial_ = 0;
    std::size_t transition_count_ = 0;
    std::uint32_t max_out_degree_ = 0;
    std::vector<std::string> alphabet_;
    std::vector<std::string> state_names_;
    std::vector<std::vector<StateId>> succ_;      // state_count * action_count, row major
    std::vector<std::vector<ActionId>> enabled_;  // one per state
};

// Aldebaran format: a "des (<initial>,<transitions>,<states>)" header line
// followed by one "(<from>,\"<label>\",<to>)" line per transition.
Lts parse_aut(const std::string& text);
std::string serialize_aut(const Lts& lts);

// Side-by-side composition with no interaction. States of `a` keep their
// indices, states of `b` are shifted by a.state_count(); the returned offset
// is that shift. Every state gets a name: existing names are kept, unnamed
// states become s<i> on the left and t<j> on the right.
std::pair<Lts, StateId> disjoint_union(const Lts& a, const Lts& b);

// Resolves a state token: display names take precedence, then a decimal
// index. (CCS systems name a deadlocked term "0", so names must win.)
StateId resolve_state(const Lts& lts, std::string_view token);

}  // namespace uptoind

#endif
