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

#include "uptoind/upto.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "uptoind/errors.hpp"

namespace uptoind {

UptoTerm UptoTerm::id() { return UptoTerm(); }

UptoTerm UptoTerm::constant(std::string name) {
    UptoTerm t;
    t.kind_ = Kind::Const;
    t.name_ = std::move(name);
    return t;
}

UptoTerm UptoTerm::comp(UptoTerm f, UptoTerm g) {
    UptoTerm t;
    t.kind_ = Kind::Comp;
    t.children_.push_back(std::move(f));
    t.children_.push_back(std::move(g));
    return t;
}

UptoTerm UptoTerm::union_of(std::vector<UptoTerm> parts) {
    if (parts.empty()) throw Error("a union needs at least one part");
    UptoTerm t;
    t.kind_ = Kind::Union;
    t.children_ = std::move(parts);
    return t;
}

UptoTerm UptoTerm::chain2(UptoTerm f, UptoTerm g) {
    UptoTerm t;
    t.kind_ = Kind::Chain2;
    t.children_.push_back(std::move(f));
    t.children_.push_back(std::move(g));
    return t;
}

UptoTerm UptoTerm::star(UptoTerm f) {
    UptoTerm t;
    t.kind_ = Kind::Star;
    t.children_.push_back(std::move(f));
    return t;
}

UptoTerm UptoTerm::pre(Family fam) {
    UptoTerm t;
    t.kind_ = Kind::Pre;
    t.fam_ = fam;
    return t;
}

UptoTerm UptoTerm::ctx(std::string name) {
    UptoTerm t;
    t.kind_ = Kind::Ctx;
    t.name_ = std::move(name);
    return t;
}

namespace {

class UptoParser {
public:
    explicit UptoParser(const std::string& text) : text_(text) {}

    UptoTerm parse() {
        UptoTerm t = parse_term();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, 1, pos_ + 1);
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

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    std::string word() {
        skip_ws();
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_' ||
                text_[end] == '-'))
            ++end;
        if (end == pos_) fail("expected a name");
        std::string w = text_.substr(pos_, end - pos_);
        pos_ = end;
        return w;
    }

    UptoTerm parse_term() {
        const std::string head = word();
        if (head == "id") return UptoTerm::id();
        if (head == "const") {
            expect('(');
            std::string name = word();
            expect(')');
            return UptoTerm::constant(std::move(name));
        }
        if (head == "pre") {
            expect('(');
            const std::string name = word();
            expect(')');
            auto fam = parse_family(name);
            if (!fam) fail("unknown family '" + name + "'");
            return UptoTerm::pre(*fam);
        }
        if (head == "comp" || head == "chain") {
            expect('(');
            UptoTerm f = parse_term();
            expect(',');
            UptoTerm g = parse_term();
            expect(')');
            return head == "comp" ? UptoTerm::comp(std::move(f), std::move(g))
                                  : UptoTerm::chain2(std::move(f), std::move(g));
        }
        if (head == "union") {
            expect('(');
            std::vector<UptoTerm> parts;
            parts.push_back(parse_term());
            while (eat(',')) parts.push_back(parse_term());
            expect(')');
            return UptoTerm::union_of(std::move(parts));
        }
        if (head == "star") {
            expect('(');
            UptoTerm f = parse_term();
            expect(')');
            return UptoTerm::star(std::move(f));
        }
        if (head == "ctx") {
            expect('(');
            std::string name = word();
            expect(')');
            return UptoTerm::ctx(std::move(name));
        }
        fail("unknown combinator '" + head + "'");
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

UptoTerm parse_upto(const std::string& text) { return UptoParser(text).parse(); }

std::string print_upto(const UptoTerm& t) {
    std::ostringstream os;
    switch (t.kind()) {
        case UptoTerm::Kind::Id:
            os << "id";
            break;
        case UptoTerm::Kind::Const:
            os << "const(" << t.name() << ")";
            break;
        case UptoTerm::Kind::Pre:
            os << "pre(" << family_name(t.fam()) << ")";
            break;
        case UptoTerm::Kind::Comp:
            os << "comp(" << print_upto(t.children()[0]) << ", " << print_upto(t.children()[1])
               << ")";
            break;
        case UptoTerm::Kind::Chain2:
            os << "chain(" << print_upto(t.children()[0]) << ", " << print_upto(t.children()[1])
               << ")";
            break;
        case UptoTerm::Kind::Union: {
            os << "union(";
            for (std::size_t i = 0; i < t.children().size(); ++i) {
                if (i > 0) os << ", ";
                os << print_upto(t.children()[i]);
            }
            os << ")";
            break;
        }
        case UptoTerm::Kind::Star:
            os << "star(" << print_upto(t.children()[0]) << ")";
            break;
        case UptoTerm::Kind::Ctx:
            os << "ctx(" << t.name() << ")";
            break;
    }
    return os.str();
}

UptoEnv UptoEnv::for_lts(Lts lts) {
    UptoEnv env;
    env.lts = std::move(lts);
    return env;
}

UptoEnv UptoEnv::for_processes(SosResult sos) {
    UptoEnv env;
    env.lts = std::move(sos.lts);
    env.state_terms = std::move(sos.state_terms);
    env.state_ids = std::move(sos.state_ids);
    return env;
}

Relation UptoEnv::resolve_constant(const std::string& name) const {
    if (auto it = constants.find(name); it != constants.end()) {
        if (it->second.dim() != lts.state_count())
            throw EnvError("relation constant '" + name + "' has the wrong dimension");
        return it->second;
    }
    if (name == "refl") return Relation::identity(lts.state_count());
    if (name == "top") return Relation::full(lts.state_count());
    if (name == "empty") return Relation::empty(lts.state_count());
    throw EnvError("unknown relation constant '" + name + "'");
}

const std::vector<CcsTerm>& UptoEnv::resolve_contexts(const std::string& name) const {
    auto it = contexts.find(name);
    if (it == contexts.end()) throw EnvError("unknown context set '" + name + "'");
    return it->second;
}

const Relation& UptoEnv::preorder_of(Family fam) const {
    auto it = preorder_cache_.find(fam);
    if (it == preorder_cache_.end())
        it = preorder_cache_.emplace(fam, preorder(lts, fam, powerset_cap)).first;
    return it->second;
}

Relation eval_upto(const UptoTerm& t, const Relation& r, const UptoEnv& env) {
    if (r.dim() != env.lts.state_count())
        throw Error("relation dimension does not match the environment's system");
    switch (t.kind()) {
        case UptoTerm::Kind::Id:
            return r;
        case UptoTerm::Kind::Const:
            return env.resolve_constant(t.name());
        case UptoTerm::Kind::Pre: {
            const Relation& pre = env.preorder_of(t.fam());
            return pre.compose(r).compose(pre);
        }
        case UptoTerm::Kind::Comp:
            return eval_upto(t.children()[0], eval_upto(t.children()[1], r, env), env);
        case UptoTerm::Kind::Union: {
            Relation out = Relation::empty(r.dim());
            for (const UptoTerm& c : t.children()) out |= eval_upto(c, r, env);
            return out;
        }
        case UptoTerm::Kind::Chain2:
            return eval_upto(t.children()[0], r, env)
                .compose(eval_upto(t.children()[1], r, env));
        case UptoTerm::Kind::Star:
            return eval_upto(t.children()[0], r, env).reflexive_transitive_closure();
        case UptoTerm::Kind::Ctx: {
            if (env.state_terms.empty())
                throw EnvError(
                    "context closure needs a process-unfolded system; this environment has "
                    "no state terms");
            const std::vector<CcsTerm>& ctxs = env.resolve_contexts(t.name());
            Relation out(r.dim());
            r.for_each([&](StateId p, StateId q) {
                for (const CcsTerm& c : ctxs) {
                    const CcsTerm cp = normal_form(subst_hole(c, env.state_terms[p]));
                    const CcsTerm cq = normal_form(subst_hole(c, env.state_terms[q]));
                    auto ip = env.state_ids.find(cp);
                    auto iq = env.state_ids.find(cq);
                    if (ip != env.state_ids.end() && iq != env.state_ids.end())
                        out.add(ip->second, iq->second);
                }
            });
            return out;
        }
    }
    return r;
}

RelEndo to_endo(const UptoTerm& t, const UptoEnv& env) {
    return RelEndo{print_upto(t),
                   [t, &env](const Relation& r) { return eval_upto(t, r, env); }, true};
}

unsigned ctx_depth(const UptoTerm& t) {
    switch (t.kind()) {
        case UptoTerm::Kind::Id:
        case UptoTerm::Kind::Const:
        case UptoTerm::Kind::Pre:
            return 0;
        case UptoTerm::Kind::Ctx:
            return 1;
        case UptoTerm::Kind::Comp:
            return ctx_depth(t.children()[0]) + ctx_depth(t.children()[1]);
        case UptoTerm::Kind::Union:
        case UptoTerm::Kind::Chain2: {
            unsigned d = 0;
            for (const UptoTerm& c : t.children()) d = std::max(d, ctx_depth(c));
            return d;
        }
        case UptoTerm::Kind::Star: {
            const unsigned d = ctx_depth(t.children()[0]);
            return d == 0 ? 0 : 3 * d;
        }
    }
    return 0;
}

namespace {

bool derive_wp(const UptoTerm& t, Family fam, const UptoEnv& env, std::vector<std::string>& log) {
    switch (t.kind()) {
        case UptoTerm::Kind::Id:
            log.push_back("id preserves every level");
            return true;
        case UptoTerm::Kind::Const: {
            Relation s;
            try {
                s = env.resolve_constant(t.name());
                if (!s.subset_of(env.preorder_of(fam))) return false;
            } catch (const CapExceeded&) {
                return false;
            }
            log.push_back("const(" + t.name() +
                          ") is contained in the family preorder, hence in every level");
            return true;
        }
        case UptoTerm::Kind::Pre:
            if (t.fam() != fam) return false;
            log.push_back("pre(" + std::string(family_name(fam)) +
                          ") composes each level with the preorder on both sides, which stays "
                          "inside the level");
            return true;
        case UptoTerm::Kind::Comp:
            if (!derive_wp(t.children()[1], fam, env, log) ||
                !derive_wp(t.children()[0], fam, env, log))
                return false;
            log.push_back("composition of level-preserving functions preserves levels");
            return true;
        case UptoTerm::Kind::Union:
            for (const UptoTerm& c : t.children())
                if (!derive_wp(c, fam, env, log)) return false;
            log.push_back("a union of level-preserving functions preserves levels");
            return true;
        case UptoTerm::Kind::Chain2:
            if (!derive_wp(t.children()[0], fam, env, log) ||
                !derive_wp(t.children()[1], fam, env, log))
                return false;
            log.push_back(
                "relational chaining of level-preserving functions preserves levels, since "
                "every level is transitive");
            return true;
        case UptoTerm::Kind::Star:
            if (!derive_wp(t.children()[0], fam, env, log)) return false;
            log.push_back(
                "the reflexive-transitive closure of a level-preserving function preserves "
                "levels, since every level is a preorder");
            return true;
        case UptoTerm::Kind::Ctx:
            // Context closure has no shape-level argument; it must be
            // checked against the chain.
            return false;
    }
    return false;
}

}  // namespace

std::optional<std::vector<std::string>> structurally_wp(const UptoTerm& t, Family fam,
                                                        const UptoEnv& env) {
    std::vector<std::string> log;
    if (!derive_wp(t, fam, env, log)) return std::nullopt;
    return log;
}

CheckReport check_wp(const UptoTerm& t, Family fam, const UptoEnv& env, unsigned n_max,
                     const CheckOptions& opts) {
    Chain chain = approximant_chain(env.lts, fam, env.powerset_cap);
    CheckReport report = check_ap(to_endo(t, env), chain, n_max, opts);
    report.property = "wp";
    return report;
}

}  // namespace uptoind
