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

#include "uptoind/lts.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace uptoind {

Lts::Lts(std::uint32_t state_count,
         std::vector<std::string> alphabet,
         const std::vector<std::tuple<StateId, ActionId, StateId>>& transitions,
         StateId initial,
         std::vector<std::string> state_names)
    : state_count_(state_count),
      initial_(initial),
      alphabet_(std::move(alphabet)),
      state_names_(std::move(state_names)) {
    if (state_count_ == 0 && (!transitions.empty() || initial_ != 0))
        throw Error("transition system with zero states cannot have transitions or an initial state");
    if (state_count_ > 0 && initial_ >= state_count_)
        throw Error("initial state out of range");
    if (!state_names_.empty() && state_names_.size() != state_count_)
        throw Error("state name list must be empty or name every state");
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
        for (std::size_t j = i + 1; j < alphabet_.size(); ++j)
            if (alphabet_[i] == alphabet_[j])
                throw Error("duplicate action label \"" + alphabet_[i] + "\"");

    const std::size_t cells = static_cast<std::size_t>(state_count_) * alphabet_.size();
    succ_.assign(cells, {});
    for (const auto& [from, act, to] : transitions) {
        if (from >= state_count_ || to >= state_count_)
            throw Error("transition endpoint out of range");
        if (act >= alphabet_.size())
            throw Error("transition action out of range");
        succ_[static_cast<std::size_t>(from) * alphabet_.size() + act].push_back(to);
    }
    enabled_.assign(state_count_, {});
    for (StateId p = 0; p < state_count_; ++p) {
        for (ActionId a = 0; a < alphabet_.size(); ++a) {
            auto& v = succ_[static_cast<std::size_t>(p) * alphabet_.size() + a];
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            transition_count_ += v.size();
            max_out_degree_ = std::max<std::uint32_t>(max_out_degree_, static_cast<std::uint32_t>(v.size()));
            if (!v.empty()) enabled_[p].push_back(a);
        }
    }
}

std::optional<ActionId> Lts::find_action(std::string_view label) const {
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
        if (alphabet_[i] == label) return static_cast<ActionId>(i);
    return std::nullopt;
}

const std::vector<StateId>& Lts::successors(StateId p, ActionId a) const {
    return succ_[static_cast<std::size_t>(p) * alphabet_.size() + a];
}

const std::vector<ActionId>& Lts::enabled(StateId p) const {
    return enabled_[p];
}

bool Lts::refuses(StateId p, ActionId a) const {
    return successors(p, a).empty();
}

std::string Lts::state_name(StateId p) const {
    if (p < state_names_.size()) return state_names_[p];
    return std::to_string(p);
}

std::optional<StateId> Lts::find_state(std::string_view name) const {
    for (std::size_t i = 0; i < state_names_.size(); ++i)
        if (state_names_[i] == name) return static_cast<StateId>(i);
    return std::nullopt;
}

bool Lts::operator==(const Lts& other) const {
    return state_count_ == other.state_count_ && initial_ == other.initial_ &&
           alphabet_ == other.alphabet_ && state_names_ == other.state_names_ &&
           succ_ == other.succ_;
}

namespace {

struct LineScanner {
    std::string_view s;
    std::size_t line_no;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }

    void expect(char c, const char* what) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c)
            throw ParseError(std::string("expected '") + c + "' " + what, line_no, pos + 1);
        ++pos;
    }

    std::uint64_t number(const char* what) {
        skip_ws();
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), value);
        if (ec != std::errc() || ptr == s.data() + pos)
            throw ParseError(std::string("expected a number ") + what, line_no, pos + 1);
        pos = static_cast<std::size_t>(ptr - s.data());
        return value;
    }

    std::string quoted(const char* what) {
        skip_ws();
        if (pos >= s.size() || s[pos] != '"')
            throw ParseError(std::string("expected a quoted ") + what, line_no, pos + 1);
        ++pos;
        const std::size_t start = pos;
        while (pos < s.size() && s[pos] != '"') ++pos;
        if (pos >= s.size())
            throw ParseError(std::string("unterminated quoted ") + what, line_no, start);
        std::string out(s.substr(start, pos - start));
        ++pos;
        return out;
    }

    void end() {
        skip_ws();
        if (pos < s.size())
            throw ParseError("trailing characters", line_no, pos + 1);
    }
};

bool blank(std::string_view s) {
    return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::vector<std::pair<std::size_t, std::string_view>> nonblank_lines(const std::string& text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t line_no = 1, start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        std::size_t end = (nl == std::string::npos) ? text.size() : nl;
        std::string_view line(text.data() + start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!blank(line)) out.emplace_back(line_no, line);
        if (nl == std::string::npos) break;
        start = nl + 1;
        ++line_no;
    }
    return out;
}

}  // namespace

Lts parse_aut(const std::string& text) {
    auto lines = nonblank_lines(text);
    if (lines.empty()) throw ParseError("missing \"des\" header", 1);

    LineScanner hdr{lines[0].second, lines[0].first};
    hdr.skip_ws();
    if (hdr.s.substr(hdr.pos, 3) != "des")
        throw ParseError("missing \"des\" header", hdr.line_no, hdr.pos + 1);
    hdr.pos += 3;
    hdr.expect('(', "after \"des\"");
    const std::uint64_t init = hdr.number("for the initial state");
    hdr.expect(',', "in header");
    const std::uint64_t trans_count = hdr.number("for the transition count");
    hdr.expect(',', "in header");
    const std::uint64_t state_count = hdr.number("for the state count");
    hdr.expect(')', "closing header");
    hdr.end();

    if (state_count == 0) throw ParseError("state count must be positive", lines[0].first);
    if (init >= state_count) throw ParseError("initial state out of range", lines[0].first);

    std::vector<std::string> alphabet;
    std::map<std::string, ActionId> action_of;
    std::vector<std::tuple<StateId, ActionId, StateId>> transitions;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        LineScanner ln{lines[i].second, lines[i].first};
        ln.expect('(', "starting a transition");
        const std::uint64_t from = ln.number("for the source state");
        ln.expect(',', "in transition");
        std::string label = ln.quoted("action label");
        ln.expect(',', "in transition");
        const std::uint64_t to = ln.number("for the target state");
        ln.expect(')', "closing transition");
        ln.end();
        if (from >= state_count || to >= state_count)
            throw ParseError("transition endpoint out of range", lines[i].first);
        auto [it, fresh] = action_of.try_emplace(label, static_cast<ActionId>(alphabet.size()));
        if (fresh) alphabet.push_back(std::move(label));
        transitions.emplace_back(static_cast<StateId>(from), it->second, static_cast<StateId>(to));
    }
    if (transitions.size() != trans_count)
        throw ParseError("header announces " + std::to_string(trans_count) + " transitions but " +
                             std::to_string(transitions.size()) + " are listed",
                         lines[0].first);

    return Lts(static_cast<std::uint32_t>(state_count), std::move(alphabet), transitions,
               static_cast<StateId>(init));
}

std::string serialize_aut(const Lts& lts) {
    if (lts.state_count() == 0) throw Error("cannot serialize a transition system with no states");
    for (const auto& label : lts.alphabet())
        if (label.find_first_of("\"\n\r") != std::string::npos)
            throw Error("action label \"" + label + "\" cannot be serialized");

    std::ostringstream out;
    out << "des (" << lts.initial() << "," << lts.transition_count() << "," << lts.state_count()
        << ")\n";
    for (StateId p = 0; p < lts.state_count(); ++p)
        for (ActionId a = 0; a < lts.action_count(); ++a)
            for (StateId q : lts.successors(p, a))
                out << "(" << p << ",\"" << lts.action_label(a) << "\"," << q << ")\n";
    return out.str();
}

std::pair<Lts, StateId> disjoint_union(const Lts& a, const Lts& b) {
    const StateId offset = a.state_count();
    std::vector<std::string> alphabet = a.alphabet();
    std::vector<ActionId> remap(b.action_count());
    for (ActionId ba = 0; ba < b.action_count(); ++ba) {
        if (auto existing = [&]() -> std::optional<ActionId> {
                for (std::size_t i = 0; i < alphabet.size(); ++i)
                    if (alphabet[i] == b.action_label(ba)) return static_cast<ActionId>(i);
                return std::nullopt;
            }()) {
            remap[ba] = *existing;
        } else {
            remap[ba] = static_cast<ActionId>(alphabet.size());
            alphabet.push_back(b.action_label(ba));
        }
    }

    std::vector<std::tuple<StateId, ActionId, StateId>> transitions;
    for (StateId p = 0; p < a.state_count(); ++p)
        for (ActionId act = 0; act < a.action_count(); ++act)
            for (StateId q : a.successors(p, act)) transitions.emplace_back(p, act, q);
    for (StateId p = 0; p < b.state_count(); ++p)
        for (ActionId act = 0; act < b.action_count(); ++act)
            for (StateId q : b.successors(p, act))
                transitions.emplace_back(p + offset, remap[act], q + offset);

    std::vector<std::string> names;
    names.reserve(a.state_count() + b.state_count());
    for (StateId p = 0; p < a.state_count(); ++p)
        names.push_back(a.state_names().empty() ? "s" + std::to_string(p) : a.state_names()[p]);
    for (StateId p = 0; p < b.state_count(); ++p)
        names.push_back(b.state_names().empty() ? "t" + std::to_string(p) : b.state_names()[p]);

    Lts combined(a.state_count() + b.state_count(), std::move(alphabet), transitions, a.initial(),
                 std::move(names));
    return {std::move(combined), offset};
}

StateId resolve_state(const Lts& lts, std::string_view token) {
    if (auto named = lts.find_state(token)) return *named;
    std::uint64_t index = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), index);
    if (ec == std::errc() && ptr == token.data() + token.size()) {
        if (index >= lts.state_count())
            throw Error("state index " + std::string(token) + " out of range");
        return static_cast<StateId>(index);
    }
    throw Error("unknown state \"" + std::string(token) + "\"");
}

}  // namespace uptoind
