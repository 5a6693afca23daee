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

#include "uptoind/ccs.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <sstream>
#include <tuple>

#include "uptoind/errors.hpp"

namespace uptoind {

CcsTerm CcsTerm::nil() { return CcsTerm(); }

CcsTerm CcsTerm::prefix(std::string action, CcsTerm body) {
    if (action.empty()) throw Error("prefix action must not be empty");
    CcsTerm t;
    t.kind_ = Kind::Prefix;
    t.action_ = std::move(action);
    t.children_.push_back(std::move(body));
    return t;
}

CcsTerm CcsTerm::sum(std::vector<CcsTerm> children) {
    if (children.size() < 2) throw Error("a sum needs at least two operands");
    CcsTerm t;
    t.kind_ = Kind::Sum;
    t.children_ = std::move(children);
    return t;
}

CcsTerm CcsTerm::par(std::vector<CcsTerm> children) {
    if (children.size() < 2) throw Error("a parallel composition needs at least two operands");
    CcsTerm t;
    t.kind_ = Kind::Par;
    t.children_ = std::move(children);
    return t;
}

CcsTerm CcsTerm::hole() {
    CcsTerm t;
    t.kind_ = Kind::Hole;
    return t;
}

std::size_t CcsTerm::hole_count() const {
    if (kind_ == Kind::Hole) return 1;
    std::size_t n = 0;
    for (const CcsTerm& c : children_) n += c.hole_count();
    return n;
}

int CcsTerm::compare(const CcsTerm& a, const CcsTerm& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
    if (a.kind_ == Kind::Prefix && a.action_ != b.action_)
        return a.action_ < b.action_ ? -1 : 1;
    const std::size_t n = std::min(a.children_.size(), b.children_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(a.children_[i], b.children_[i]); c != 0) return c;
    if (a.children_.size() != b.children_.size())
        return a.children_.size() < b.children_.size() ? -1 : 1;
    return 0;
}

namespace {

class CcsParser {
public:
    CcsParser(const std::string& text, std::size_t line_no)
        : text_(text), line_(line_no) {}

    CcsTerm parse() {
        CcsTerm t = parse_par();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line_, pos_ + 1);
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    CcsTerm parse_par() {
        std::vector<CcsTerm> ops;
        ops.push_back(parse_sum());
        while (eat('|')) ops.push_back(parse_sum());
        if (ops.size() == 1) return std::move(ops.front());
        return CcsTerm::par(std::move(ops));
    }

    CcsTerm parse_sum() {
        std::vector<CcsTerm> ops;
        ops.push_back(parse_prefix());
        while (eat('+')) ops.push_back(parse_prefix());
        if (ops.size() == 1) return std::move(ops.front());
        return CcsTerm::sum(std::move(ops));
    }

    CcsTerm parse_prefix() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected a process term");
        const char c = text_[pos_];
        if (c == '0') {
            ++pos_;
            return CcsTerm::nil();
        }
        if (c == '(') {
            ++pos_;
            CcsTerm inner = parse_par();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (c == '[') {
            ++pos_;
            if (!eat(']')) fail("expected ']' to close the hole");
            return CcsTerm::hole();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            std::string name = text_.substr(pos_, end - pos_);
            pos_ = end;
            if (!eat('.')) fail("expected '.' after action '" + name + "'");
            return CcsTerm::prefix(std::move(name), parse_prefix());
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

bool needs_parens(const CcsTerm& child, CcsTerm::Kind parent) {
    // `.` binds tightest, then `+`, then `|`.
    if (parent == CcsTerm::Kind::Prefix)
        return child.kind() == CcsTerm::Kind::Sum || child.kind() == CcsTerm::Kind::Par;
    if (parent == CcsTerm::Kind::Sum) return child.kind() == CcsTerm::Kind::Par;
    return false;
}

void print_to(const CcsTerm& t, std::ostringstream& os) {
    auto child = [&](const CcsTerm& c) {
        if (needs_parens(c, t.kind())) {
            os << '(';
            print_to(c, os);
            os << ')';
        } else {
            print_to(c, os);
        }
    };
    switch (t.kind()) {
        case CcsTerm::Kind::Nil:
            os << '0';
            break;
        case CcsTerm::Kind::Hole:
            os << "[]";
            break;
        case CcsTerm::Kind::Prefix:
            os << t.action() << '.';
            child(t.body());
            break;
        case CcsTerm::Kind::Sum:
        case CcsTerm::Kind::Par: {
            const char* op = t.kind() == CcsTerm::Kind::Sum ? " + " : " | ";
            for (std::size_t i = 0; i < t.children().size(); ++i) {
                if (i > 0) os << op;
                child(t.children()[i]);
            }
            break;
        }
    }
}

}  // namespace

CcsTerm parse_ccs(const std::string& text, std::size_t line_no) {
    return CcsParser(text, line_no).parse();
}

std::string print_ccs(const CcsTerm& t) {
    std::ostringstream os;
    print_to(t, os);
    return os.str();
}

CcsTerm normal_form(const CcsTerm& t) {
    switch (t.kind()) {
        case CcsTerm::Kind::Nil:
        case CcsTerm::Kind::Hole:
            return t;
        case CcsTerm::Kind::Prefix:
            return CcsTerm::prefix(t.action(), normal_form(t.body()));
        case CcsTerm::Kind::Sum:
        case CcsTerm::Kind::Par: {
            std::vector<CcsTerm> flat;
            for (const CcsTerm& c : t.children()) {
                CcsTerm n = normal_form(c);
                if (n.kind() == t.kind())
                    for (const CcsTerm& g : n.children()) flat.push_back(g);
                else
                    flat.push_back(std::move(n));
            }
            std::sort(flat.begin(), flat.end());
            return t.kind() == CcsTerm::Kind::Sum ? CcsTerm::sum(std::move(flat))
                                                  : CcsTerm::par(std::move(flat));
        }
    }
    return t;
}

CcsTerm subst_hole(const CcsTerm& ctx, const CcsTerm& arg) {
    if (ctx.hole_count() != 1) throw Error("a context must have exactly one hole");
    if (arg.hole_count() != 0) throw Error("cannot plug a context into a context");
    std::function<CcsTerm(const CcsTerm&)> go = [&](const CcsTerm& t) -> CcsTerm {
        switch (t.kind()) {
            case CcsTerm::Kind::Hole:
                return arg;
            case CcsTerm::Kind::Nil:
                return t;
            case CcsTerm::Kind::Prefix:
                return CcsTerm::prefix(t.action(), go(t.body()));
            case CcsTerm::Kind::Sum:
            case CcsTerm::Kind::Par: {
                std::vector<CcsTerm> cs;
                cs.reserve(t.children().size());
                for (const CcsTerm& c : t.children()) cs.push_back(go(c));
                return t.kind() == CcsTerm::Kind::Sum ? CcsTerm::sum(std::move(cs))
                                                      : CcsTerm::par(std::move(cs));
            }
        }
        return t;
    };
    return go(ctx);
}

std::vector<std::pair<std::string, CcsTerm>> parse_ccs_file(const std::string& text) {
    std::vector<std::pair<std::string, CcsTerm>> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'NAME = TERM'", line_no, first + 1);
        std::string name = line.substr(first, eq - first);
        while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
        if (name.empty() || name.find_first_of(" \t") != std::string::npos)
            throw ParseError("bad definition name", line_no, first + 1);
        for (const auto& [seen, term] : out)
            if (seen == name) throw ParseError("duplicate definition of '" + name + "'", line_no, first + 1);
        std::string body = line.substr(eq + 1);
        if (!body.empty() && body.back() == '\r') body.pop_back();
        out.emplace_back(std::move(name), parse_ccs(body, line_no));
    }
    return out;
}

std::optional<StateId> SosResult::state_of(const CcsTerm& t) const {
    auto it = state_ids.find(normal_form(t));
    if (it == state_ids.end()) return std::nullopt;
    return it->second;
}

namespace {

// One SOS layer: the actions a normal-form term can fire, with successors
// already in normal form.
void derivatives(const CcsTerm& t, std::vector<std::pair<std::string, CcsTerm>>& out) {
    switch (t.kind()) {
        case CcsTerm::Kind::Nil:
        case CcsTerm::Kind::Hole:
            break;
        case CcsTerm::Kind::Prefix:
            out.emplace_back(t.action(), t.body());
            break;
        case CcsTerm::Kind::Sum:
            for (const CcsTerm& c : t.children()) derivatives(c, out);
            break;
        case CcsTerm::Kind::Par: {
            for (std::size_t i = 0; i < t.children().size(); ++i) {
                std::vector<std::pair<std::string, CcsTerm>> local;
                derivatives(t.children()[i], local);
                for (auto& [a, succ] : local) {
                    std::vector<CcsTerm> cs = t.children();
                    cs[i] = std::move(succ);
                    out.emplace_back(std::move(a), normal_form(CcsTerm::par(std::move(cs))));
                }
            }
            break;
        }
    }
}

}  // namespace

SosResult sos_lts(const std::vector<CcsTerm>& seeds, std::size_t state_cap) {
    if (seeds.empty()) throw Error("no seed terms to unfold");
    SosResult res;
    std::vector<std::string> alphabet;
    std::vector<std::tuple<StateId, ActionId, StateId>> transitions;

    auto action_id = [&](const std::string& a) -> ActionId {
        for (std::size_t i = 0; i < alphabet.size(); ++i)
            if (alphabet[i] == a) return static_cast<ActionId>(i);
        alphabet.push_back(a);
        return static_cast<ActionId>(alphabet.size() - 1);
    };

    std::deque<StateId> work;
    auto state_id = [&](const CcsTerm& nf) -> StateId {
        auto [it, fresh] = res.state_ids.try_emplace(nf, static_cast<StateId>(res.state_terms.size()));
        if (fresh) {
            if (res.state_terms.size() >= state_cap)
                throw CapExceeded("process unfolding exceeded the state cap of " +
                                  std::to_string(state_cap));
            res.state_terms.push_back(nf);
            work.push_back(it->second);
        }
        return it->second;
    };

    for (const CcsTerm& seed : seeds) {
        if (seed.hole_count() != 0) throw Error("cannot unfold a context; plug its hole first");
        state_id(normal_form(seed));
    }

    while (!work.empty()) {
        const StateId s = work.front();
        work.pop_front();
        std::vector<std::pair<std::string, CcsTerm>> out;
        derivatives(res.state_terms[s], out);
        for (auto& [a, succ] : out) {
            const ActionId aid = action_id(a);
            transitions.emplace_back(s, aid, state_id(succ));
        }
    }

    std::vector<std::string> names;
    names.reserve(res.state_terms.size());
    for (const CcsTerm& t : res.state_terms) names.push_back(print_ccs(t));
    res.lts = Lts(static_cast<std::uint32_t>(res.state_terms.size()), alphabet, transitions, 0,
                  names);
    return res;
}

std::vector<std::pair<CcsTerm, CcsTerm>> ctx_closure(
    const std::vector<std::pair<CcsTerm, CcsTerm>>& r, const std::vector<CcsTerm>& contexts) {
    std::vector<std::pair<CcsTerm, CcsTerm>> out = r;
    for (const auto& [p, q] : r) {
        if (p.hole_count() != 0 || q.hole_count() != 0)
            throw Error("related terms must not contain holes");
        for (const CcsTerm& c : contexts) out.emplace_back(subst_hole(c, p), subst_hole(c, q));
    }
    return out;
}

}  // namespace uptoind
