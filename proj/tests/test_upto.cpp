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

#include <string>
#include <vector>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "uptoind/errors.hpp"
#include "uptoind/upto.hpp"

using namespace uptoind;

namespace {

UptoEnv fixture_env() {
    auto [u, off] = testfix::l1_beside_l2();
    return UptoEnv::for_lts(u);
}

}  // namespace

TEST_CASE("upto text parses and prints stably") {
    for (const char* text :
         {"id", "const(refl)", "pre(failure-trace)", "comp(id, pre(trace))",
          "union(id, const(top), star(id))", "chain(id, id)", "star(union(id, ctx(C)))",
          "ctx(C)"}) {
        UptoTerm t = parse_upto(text);
        CHECK(print_upto(t) == text);
    }
    CHECK(parse_upto("  union( id ,const(refl) )  ").kind() == UptoTerm::Kind::Union);

    CHECK_THROWS_AS(parse_upto(""), ParseError);
    CHECK_THROWS_AS(parse_upto("comp(id)"), ParseError);
    CHECK_THROWS_AS(parse_upto("pre(bogus)"), ParseError);
    CHECK_THROWS_AS(parse_upto("id id"), ParseError);
    CHECK_THROWS_AS(parse_upto("union()"), ParseError);
}

TEST_CASE("random upto terms survive reparsing") {
    auto rng = testgen::rng_for(61);
    for (int i = 0; i < 200; ++i) {
        UptoTerm t = testgen::random_upto(rng, 3);
        const std::string s1 = print_upto(t);
        UptoTerm back = parse_upto(s1);
        CHECK(print_upto(back) == s1);
    }
}

TEST_CASE("evaluation follows the combinator meanings") {
    UptoEnv env = fixture_env();
    const std::uint32_t dim = env.lts.state_count();
    auto rng = testgen::rng_for(62);
    Relation r = testgen::random_relation(rng, dim, 0.25);

    CHECK(eval_upto(UptoTerm::id(), r, env) == r);
    CHECK(eval_upto(parse_upto("const(refl)"), r, env) == Relation::identity(dim));
    CHECK(eval_upto(parse_upto("const(top)"), r, env) == Relation::full(dim));
    CHECK(eval_upto(parse_upto("const(empty)"), r, env) == Relation::empty(dim));
    CHECK(eval_upto(parse_upto("star(id)"), r, env) == r.reflexive_transitive_closure());
    CHECK(eval_upto(parse_upto("chain(id, id)"), r, env) == r.compose(r));
    CHECK(eval_upto(parse_upto("union(id, const(refl))"), r, env) ==
          (r | Relation::identity(dim)));
    // comp applies the left function to the right one's image
    CHECK(eval_upto(parse_upto("comp(star(id), const(empty))"), r, env) ==
          Relation::empty(dim).reflexive_transitive_closure());

    const Relation pre = env.preorder_of(Family::Trace);
    CHECK(eval_upto(parse_upto("pre(trace)"), r, env) == pre.compose(r).compose(pre));

    CHECK_THROWS_AS(eval_upto(parse_upto("const(missing)"), r, env), EnvError);
    CHECK_THROWS_AS(eval_upto(parse_upto("ctx(missing)"), r, env), EnvError);
}

TEST_CASE("named constants resolve from the environment") {
    UptoEnv env = fixture_env();
    Relation d(env.lts.state_count());
    d.add(1, 6);
    env.constants["D"] = d;
    Relation r(env.lts.state_count());
    CHECK(eval_upto(parse_upto("const(D)"), r, env) == d);
    CHECK(env.resolve_constant("D") == d);
    CHECK_THROWS_AS(env.resolve_constant("E"), EnvError);
}

TEST_CASE("context closure maps pairs through process contexts") {
    CcsTerm left = parse_ccs("b.0");
    CcsTerm right = parse_ccs("b.0 + c.0");
    CcsTerm whole_l = parse_ccs("a.b.0");
    CcsTerm whole_r = parse_ccs("a.(b.0 + c.0)");
    SosResult sos = sos_lts({whole_l, whole_r, left, right});
    UptoEnv env = UptoEnv::for_processes(std::move(sos));
    env.contexts["C"] = {parse_ccs("a.[]")};

    Relation r(env.lts.state_count());
    const StateId pl = env.state_ids.at(normal_form(left));
    const StateId pr = env.state_ids.at(normal_form(right));
    r.add(pl, pr);

    Relation closed = eval_upto(parse_upto("union(id, ctx(C))"), r, env);
    CHECK(closed.contains(pl, pr));
    const StateId wl = env.state_ids.at(normal_form(whole_l));
    const StateId wr = env.state_ids.at(normal_form(whole_r));
    CHECK(closed.contains(wl, wr));
    CHECK(closed.size() == 2);

    // plain ctx() does not keep the argument pairs
    Relation ctx_only = eval_upto(parse_upto("ctx(C)"), r, env);
    CHECK(ctx_only.contains(wl, wr));
    CHECK(!ctx_only.contains(pl, pr));
}

TEST_CASE("terms evaluate monotonically") {
    UptoEnv env = fixture_env();
    Relation d(env.lts.state_count());
    d.add(0, 5);
    env.constants["D"] = d;
    auto rng = testgen::rng_for(63);
    for (int i = 0; i < 60; ++i) {
        UptoTerm t = testgen::random_upto(rng, 2);
        if (ctx_depth(t) > 0) continue;  // no context set bound in this env
        Relation small = testgen::random_relation(rng, env.lts.state_count(), 0.15);
        Relation big = small | testgen::random_relation(rng, env.lts.state_count(), 0.15);
        CHECK(eval_upto(t, small, env).subset_of(eval_upto(t, big, env)));
    }
}

TEST_CASE("endo wrappers mirror evaluation") {
    UptoEnv env = fixture_env();
    UptoTerm t = parse_upto("union(star(id), pre(simulation))");
    RelEndo e = to_endo(t, env);
    CHECK(e.declared_monotone);
    auto rng = testgen::rng_for(64);
    for (int i = 0; i < 10; ++i) {
        Relation r = testgen::random_relation(rng, env.lts.state_count(), 0.2);
        CHECK(e(r) == eval_upto(t, r, env));
    }
}

TEST_CASE("context nesting depth guides unfolding") {
    CHECK(ctx_depth(parse_upto("id")) == 0);
    CHECK(ctx_depth(parse_upto("ctx(C)")) == 1);
    CHECK(ctx_depth(parse_upto("comp(ctx(C), ctx(C))")) == 2);
    CHECK(ctx_depth(parse_upto("union(id, ctx(C))")) == 1);
    CHECK(ctx_depth(parse_upto("chain(ctx(C), id)")) == 1);
    CHECK(ctx_depth(parse_upto("star(ctx(C))")) == 3);
    CHECK(ctx_depth(parse_upto("star(id)")) == 0);
}

TEST_CASE("level preservation derives structurally for the catalogue") {
    UptoEnv env = fixture_env();
    for (Family fam : {Family::Trace, Family::Simulation}) {
        CHECK(structurally_wp(parse_upto("id"), fam, env).has_value());
        CHECK(structurally_wp(parse_upto("star(id)"), fam, env).has_value());
        CHECK(structurally_wp(parse_upto("const(refl)"), fam, env).has_value());
        CHECK(structurally_wp(parse_upto("const(empty)"), fam, env).has_value());
        CHECK(structurally_wp(UptoTerm::pre(fam), fam, env).has_value());
        CHECK(structurally_wp(parse_upto("union(id, star(id))"), fam, env).has_value());
        CHECK(structurally_wp(parse_upto("chain(id, id)"), fam, env).has_value());

        CHECK(!structurally_wp(parse_upto("const(top)"), fam, env).has_value());
        CHECK(!structurally_wp(parse_upto("ctx(C)"), fam, env).has_value());
        CHECK(!structurally_wp(parse_upto("union(id, ctx(C))"), fam, env).has_value());
    }
    // the preorder of a different family is not known to preserve levels
    CHECK(!structurally_wp(parse_upto("pre(trace)"), Family::Simulation, env).has_value());

    auto log = structurally_wp(parse_upto("star(union(id, pre(trace)))"), Family::Trace, env);
    REQUIRE(log.has_value());
    CHECK(!log->empty());
}

TEST_CASE("bounded level preservation checks against the chain") {
    UptoEnv env = fixture_env();
    CheckReport idr = check_wp(parse_upto("id"), Family::Trace, env, 4);
    CHECK(idr.passed);
    CHECK(idr.property == "wp");

    CheckReport star_r = check_wp(parse_upto("star(id)"), Family::Trace, env, 4);
    CHECK(star_r.passed);

    CheckReport top_r = check_wp(parse_upto("const(top)"), Family::Trace, env, 4);
    CHECK(!top_r.passed);
    REQUIRE(!top_r.levels.empty());
    bool found_failure = false;
    for (const auto& lv : top_r.levels)
        if (!lv.ok) {
            found_failure = true;
            CHECK(lv.level >= 1);  // level 0 is the full relation, nothing escapes it
            break;
        }
    CHECK(found_failure);

    // a constant inside the preorder passes
    UptoEnv env2 = fixture_env();
    env2.constants["P"] = env2.preorder_of(Family::Trace);
    CHECK(check_wp(parse_upto("const(P)"), Family::Trace, env2, 4).passed);
}
