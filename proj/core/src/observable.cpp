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

#include "uptoind/observable.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace uptoind {

namespace {

void sort_unique(std::vector<ActionId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

AtomicObs::AtomicObs(std::vector<ActionId> must_, std::vector<ActionId> must_not_)
    : must(std::move(must_)), must_not(std::move(must_not_)) {
    sort_unique(must);
    sort_unique(must_not);
    for (ActionId a : must)
        if (std::binary_search(must_not.begin(), must_not.end(), a))
            throw Error("atomic observable requires an action both enabled and refused");
}

Observable Observable::atom(AtomicObs o) {
    Observable t;
    t.kind_ = Kind::Atom;
    t.atom_ = std::move(o);
    return t;
}

Observable Observable::diamond(ActionId a, Observable body) {
    Observable t;
    t.kind_ = Kind::Diamond;
    t.action_ = a;
    t.children_.push_back(std::move(body));
    return t;
}

Observable Observable::conj(std::vector<Observable> children) {
    Observable t;
    t.kind_ = Kind::Conj;
    t.children_ = std::move(children);
    return t;
}

int Observable::compare(const Observable& a, const Observable& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
    switch (a.kind_) {
        case Kind::Atom:
            if (a.atom_.must != b.atom_.must) return a.atom_.must < b.atom_.must ? -1 : 1;
            if (a.atom_.must_not != b.atom_.must_not)
                return a.atom_.must_not < b.atom_.must_not ? -1 : 1;
            return 0;
        case Kind::Diamond:
            if (a.action_ != b.action_) return a.action_ < b.action_ ? -1 : 1;
            return compare(a.children_[0], b.children_[0]);
        case Kind::Conj: {
            const std::size_t n = std::min(a.children_.size(), b.children_.size());
            for (std::size_t i = 0; i < n; ++i)
                if (int c = compare(a.children_[i], b.children_[i]); c != 0) return c;
            if (a.children_.size() != b.children_.size())
                return a.children_.size() < b.children_.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

Observable ready_atom(std::vector<ActionId> ready_set, std::uint32_t alphabet_size) {
    sort_unique(ready_set);
    std::vector<ActionId> refused;
    for (ActionId a = 0; a < alphabet_size; ++a)
        if (!std::binary_search(ready_set.begin(), ready_set.end(), a)) refused.push_back(a);
    return Observable::atom(AtomicObs(std::move(ready_set), std::move(refused)));
}

unsigned weight(const Observable& theta) {
    switch (theta.kind()) {
        case Observable::Kind::Atom:
            return 0;
        case Observable::Kind::Diamond:
            return 1 + weight(theta.body());
        case Observable::Kind::Conj: {
            unsigned w = 0;
            for (const Observable& c : theta.children()) w = std::max(w, weight(c));
            return w;
        }
    }
    return 0;
}

unsigned observation_depth(const Observable& theta) {
    switch (theta.kind()) {
        case Observable::Kind::Atom:
            return 1;
        case Observable::Kind::Diamond:
            return 1 + observation_depth(theta.body());
        case Observable::Kind::Conj: {
            unsigned d = 0;
            for (const Observable& c : theta.children()) d = std::max(d, observation_depth(c));
            return d;
        }
    }
    return 0;
}

namespace {

void validate_actions(const Lts& lts, const Observable& theta) {
    switch (theta.kind()) {
        case Observable::Kind::Atom:
            for (ActionId a : theta.atom_obs().must)
                if (a >= lts.action_count()) throw Error("observable uses an action outside the alphabet");
            for (ActionId a : theta.atom_obs().must_not)
                if (a >= lts.action_count()) throw Error("observable uses an action outside the alphabet");
            return;
        case Observable::Kind::Diamond:
            if (theta.action() >= lts.action_count())
                throw Error("observable uses an action outside the alphabet");
            validate_actions(lts, theta.body());
            return;
        case Observable::Kind::Conj:
            for (const Observable& c : theta.children()) validate_actions(lts, c);
            return;
    }
}

bool eval(const Lts& lts, StateId p, const Observable& theta) {
    switch (theta.kind()) {
        case Observable::Kind::Atom: {
            for (ActionId a : theta.atom_obs().must)
                if (lts.refuses(p, a)) return false;
            for (ActionId a : theta.atom_obs().must_not)
                if (!lts.refuses(p, a)) return false;
            return true;
        }
        case Observable::Kind::Diamond: {
            for (StateId q : lts.successors(p, theta.action()))
                if (eval(lts, q, theta.body())) return true;
            return false;
        }
        case Observable::Kind::Conj: {
            for (const Observable& c : theta.children())
                if (!eval(lts, p, c)) return false;
            return true;
        }
    }
    return false;
}

}  // namespace

bool sat(const Lts& lts, StateId p, const Observable& theta) {
    if (p >= lts.state_count()) throw Error("state out of range");
    validate_actions(lts, theta);
    return eval(lts, p, theta);
}

bool sat_n(const Lts& lts, StateId p, const Observable& theta, unsigned n) {
    return weight(theta) <= n && sat(lts, p, theta);
}

Observable canonical(const Observable& theta) {
    switch (theta.kind()) {
        case Observable::Kind::Atom:
            return theta;
        case Observable::Kind::Diamond:
            return Observable::diamond(theta.action(), canonical(theta.body()));
        case Observable::Kind::Conj: {
            std::vector<Observable> cs;
            cs.reserve(theta.children().size());
            for (const Observable& c : theta.children()) cs.push_back(canonical(c));
            std::sort(cs.begin(), cs.end());
            cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
            if (cs.size() == 1) return std::move(cs.front());
            return Observable::conj(std::move(cs));
        }
    }
    return theta;
}

std::vector<Observable> downward_close(const std::vector<Observable>& thetas) {
    std::set<Observable> seen;
    std::vector<Observable> work(thetas.begin(), thetas.end());
    while (!work.empty()) {
        Observable t = std::move(work.back());
        work.pop_back();
        if (!seen.insert(t).second) continue;
        switch (t.kind()) {
            case Observable::Kind::Atom:
                break;
            case Observable::Kind::Diamond:
                work.push_back(t.body());
                break;
            case Observable::Kind::Conj:
                for (const Observable& c : t.children()) work.push_back(c);
                break;
        }
    }
    return std::vector<Observable>(seen.begin(), seen.end());
}

namespace {

constexpr const char* kLabelDelims = "<>(){};,# \t";

class FormulaParser {
public:
    FormulaParser(std::string_view text, const Lts& lts, std::size_t line_no)
        : s_(text), lts_(lts), line_(line_no) {}

    Observable parse() {
        Observable t = formula();
        skip_ws();
        if (pos_ < s_.size()) fail("trailing characters after formula");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, pos_ + 1); }

    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    std::string label_token() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::string_view(kLabelDelims).find(s_[pos_]) == std::string_view::npos)
            ++pos_;
        if (pos_ == start) fail("expected an action label");
        return std::string(s_.substr(start, pos_ - start));
    }

    ActionId action(const std::string& label) {
        if (auto a = lts_.find_action(label)) return *a;
        fail("unknown action label \"" + label + "\"");
    }

    std::vector<ActionId> label_set() {
        expect('{');
        std::vector<ActionId> out;
        skip_ws();
        if (eat('}')) return out;
        out.push_back(action(label_token()));
        while (eat(',')) out.push_back(action(label_token()));
        expect('}');
        return out;
    }

    Observable formula() {
        skip_ws();
        if (eat('<')) {
            const ActionId a = action(label_token());
            expect('>');
            return Observable::diamond(a, formula());
        }
        const std::size_t head_pos = pos_;
        const std::string head = label_token();
        if (head == "tt") return Observable::top();
        if (head == "and") {
            expect('(');
            std::vector<Observable> cs;
            skip_ws();
            if (eat(')')) return Observable::conj({});
            cs.push_back(formula());
            while (eat(',')) cs.push_back(formula());
            expect(')');
            return Observable::conj(std::move(cs));
        }
        if (head == "ref") {
            expect('(');
            const ActionId a = action(label_token());
            expect(')');
            return Observable::refusal(a);
        }
        if (head == "ready") {
            expect('(');
            std::vector<ActionId> ready = label_set();
            expect(')');
            return ready_atom(std::move(ready), lts_.action_count());
        }
        if (head == "loc") {
            expect('(');
            std::vector<ActionId> must = label_set();
            expect(';');
            std::vector<ActionId> must_not = label_set();
            expect(')');
            try {
                return Observable::atom(AtomicObs(std::move(must), std::move(must_not)));
            } catch (const Error& e) {
                throw ParseError(e.what(), line_, head_pos + 1);
            }
        }
        pos_ = head_pos;
        fail("expected a formula, got \"" + head + "\"");
    }

    std::string_view s_;
    const Lts& lts_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

}  // namespace

Observable parse_formula(const std::string& text, const Lts& lts, std::size_t line_no) {
    return FormulaParser(text, lts, line_no).parse();
}

namespace {

void print_to(std::ostream& out, const Observable& theta, const Lts& lts) {
    switch (theta.kind()) {
        case Observable::Kind::Atom: {
            const AtomicObs& a = theta.atom_obs();
            if (a.must.empty() && a.must_not.size() == 1) {
                out << "ref(" << lts.action_label(a.must_not[0]) << ")";
                return;
            }
            if (a.must.size() + a.must_not.size() == lts.action_count()) {
                out << "ready({";
                for (std::size_t i = 0; i < a.must.size(); ++i)
                    out << (i ? "," : "") << lts.action_label(a.must[i]);
                out << "})";
                return;
            }
            out << "loc({";
            for (std::size_t i = 0; i < a.must.size(); ++i)
                out << (i ? "," : "") << lts.action_label(a.must[i]);
            out << "};{";
            for (std::size_t i = 0; i < a.must_not.size(); ++i)
                out << (i ? "," : "") << lts.action_label(a.must_not[i]);
            out << "})";
            return;
        }
        case Observable::Kind::Diamond:
            out << "<" << lts.action_label(theta.action()) << ">";
            print_to(out, theta.body(), lts);
            return;
        case Observable::Kind::Conj: {
            if (theta.children().empty()) {
                out << "tt";
                return;
            }
            out << "and(";
            for (std::size_t i = 0; i < theta.children().size(); ++i) {
                if (i) out << ", ";
                print_to(out, theta.children()[i], lts);
            }
            out << ")";
            return;
        }
    }
}

}  // namespace

std::string print_formula(const Observable& theta, const Lts& lts) {
    std::ostringstream out;
    print_to(out, theta, lts);
    return out.str();
}

std::vector<std::pair<std::size_t, Observable>> parse_obs_file(const std::string& text,
                                                               const Lts& lts) {
    std::vector<std::pair<std::size_t, Observable>> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        out.emplace_back(line_no, parse_formula(line, lts, line_no));
    }
    return out;
}

}  // namespace uptoind
