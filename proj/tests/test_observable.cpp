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

#include <algorithm>
#include <vector>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "uptoind/errors.hpp"
#include "uptoind/observable.hpp"

using namespace uptoind;

namespace {

struct Fix {
    Lts l1 = parse_aut(testfix::kL1);
    Lts l2 = parse_aut(testfix::kL2);
    ActionId a = *l1.find_action("a");
    ActionId b = *l1.find_action("b");
    ActionId c = *l1.find_action("c");

    Observable branch_after_a() const {
        return Observable::diamond(
            a, Observable::conj({Observable::diamond(b, Observable::top()),
                                 Observable::diamond(c, Observable::top())}));
    }
};

}  // namespace

TEST_CASE("satisfaction separates early from late branching") {
    Fix f;
    // late choice keeps both continuations after a
    CHECK(sat(f.l2, 0, f.branch_after_a()));
    // early choice commits: no single a-successor offers both b and c
    CHECK(!sat(f.l1, 0, f.branch_after_a()));
}

TEST_CASE("tt holds everywhere") {
    Fix f;
    for (StateId p = 0; p < f.l1.state_count(); ++p) CHECK(sat(f.l1, p, Observable::top()));
    for (StateId p = 0; p < f.l2.state_count(); ++p) CHECK(sat(f.l2, p, Observable::top()));
}

TEST_CASE("atoms read the enabled set only") {
    Fix f;
    // must side
    CHECK(sat(f.l1, 0, Observable::atom(AtomicObs({f.a}, {}))));
    CHECK(!sat(f.l1, 0, Observable::atom(AtomicObs({f.b}, {}))));
    // must-not side
    CHECK(sat(f.l1, 1, Observable::refusal(f.c)));
    CHECK(!sat(f.l1, 1, Observable::refusal(f.b)));
    // both
    CHECK(sat(f.l1, 1, Observable::atom(AtomicObs({f.b}, {f.a, f.c}))));

    // two states with equal enabled sets agree on every atom
    auto rng = testgen::rng_for(31);
    for (int i = 0; i < 20; ++i) {
        Lts lts = testgen::random_lts(rng);
        for (StateId p = 0; p < lts.state_count(); ++p)
            for (StateId q = 0; q < lts.state_count(); ++q) {
                if (lts.enabled(p) != lts.enabled(q)) continue;
                for (int k = 0; k < 5; ++k) {
                    Observable th = testgen::random_observable(rng, lts, 0);
                    if (th.kind() != Observable::Kind::Atom) continue;
                    CHECK(sat(lts, p, th) == sat(lts, q, th));
                }
            }
    }
}

TEST_CASE("weight counts diamond nesting") {
    Fix f;
    Observable ab = Observable::diamond(f.a, Observable::diamond(f.b, Observable::top()));
    CHECK(weight(ab) == 2);
    CHECK(weight(Observable::refusal(f.b)) == 0);
    Observable mixed = Observable::diamond(
        f.a, Observable::conj({Observable::refusal(f.b),
                               Observable::diamond(f.c, Observable::top())}));
    CHECK(weight(mixed) == 2);
    CHECK(weight(Observable::top()) == 0);
}

TEST_CASE("observation depth charges one level per atom") {
    Fix f;
    CHECK(observation_depth(Observable::top()) == 0);
    CHECK(observation_depth(Observable::refusal(f.b)) == 1);
    Observable ab = Observable::diamond(f.a, Observable::diamond(f.b, Observable::top()));
    CHECK(observation_depth(ab) == 2);
    // a refusal behind one action: two observations deep
    CHECK(observation_depth(Observable::diamond(f.a, Observable::refusal(f.c))) == 2);

    auto rng = testgen::rng_for(32);
    Lts lts = testgen::random_lts(rng);
    for (int i = 0; i < 100; ++i) {
        Observable th = testgen::random_observable(rng, lts, 3);
        CHECK(observation_depth(th) >= weight(th));
    }
}

TEST_CASE("bounded satisfaction cuts at the weight") {
    Fix f;
    Observable ab = Observable::diamond(f.a, Observable::diamond(f.b, Observable::top()));
    REQUIRE(sat(f.l1, 0, ab));
    CHECK(sat_n(f.l1, 0, ab, 2));
    CHECK(!sat_n(f.l1, 0, ab, 1));
    CHECK(sat_n(f.l1, 0, Observable::top(), 0));
    CHECK(!sat_n(f.l1, 0, Observable::diamond(f.a, Observable::top()), 0));

    // monotone in n, and sat implies sat at the formula's own weight
    auto rng = testgen::rng_for(33);
    for (int i = 0; i < 30; ++i) {
        Lts lts = testgen::random_lts(rng);
        for (int k = 0; k < 10; ++k) {
            Observable th = testgen::random_observable(rng, lts, 3);
            for (StateId p = 0; p < lts.state_count(); ++p) {
                for (unsigned n = 0; n + 1 <= 4; ++n)
                    if (sat_n(lts, p, th, n)) CHECK(sat_n(lts, p, th, n + 1));
                if (sat(lts, p, th)) CHECK(sat_n(lts, p, th, weight(th)));
                if (sat_n(lts, p, th, 4)) CHECK(sat(lts, p, th));
            }
        }
    }
}

TEST_CASE("formula text parses to the expected trees") {
    Fix f;
    Observable d = parse_formula("<a><b>tt", f.l1);
    REQUIRE(d.kind() == Observable::Kind::Diamond);
    CHECK(d.action() == f.a);
    REQUIRE(d.body().kind() == Observable::Kind::Diamond);
    CHECK(d.body().action() == f.b);
    CHECK(d.body().body().is_top());

    Observable r = parse_formula("ref(a)", f.l1);
    REQUIRE(r.kind() == Observable::Kind::Atom);
    CHECK(r.atom_obs().must.empty());
    CHECK(r.atom_obs().must_not == std::vector<ActionId>{f.a});

    Observable cj = parse_formula("and(<a>tt, ref(b))", f.l1);
    REQUIRE(cj.kind() == Observable::Kind::Conj);
    REQUIRE(cj.children().size() == 2);
    CHECK(cj.children()[0].kind() == Observable::Kind::Diamond);
    CHECK(cj.children()[1].kind() == Observable::Kind::Atom);

    Observable rd = parse_formula("ready({b})", f.l1);
    REQUIRE(rd.kind() == Observable::Kind::Atom);
    CHECK(rd.atom_obs().must == std::vector<ActionId>{f.b});
    CHECK(rd.atom_obs().must_not == std::vector<ActionId>{f.a, f.c});
    CHECK(rd == ready_atom({f.b}, f.l1.action_count()));

    Observable lc = parse_formula("loc({a};{b})", f.l1);
    REQUIRE(lc.kind() == Observable::Kind::Atom);
    CHECK(lc.atom_obs().must == std::vector<ActionId>{f.a});
    CHECK(lc.atom_obs().must_not == std::vector<ActionId>{f.b});

    CHECK(parse_formula("tt", f.l1).is_top());
    CHECK(parse_formula("ready({})", f.l1).atom_obs().must_not ==
          std::vector<ActionId>{f.a, f.b, f.c});
}

TEST_CASE("formula parse errors name a position") {
    Fix f;
    CHECK_THROWS_AS(parse_formula("<a>", f.l1), ParseError);
    CHECK_THROWS_AS(parse_formula("and(tt", f.l1), ParseError);
    CHECK_THROWS_AS(parse_formula("<zz>tt", f.l1), ParseError);
    CHECK_THROWS_AS(parse_formula("tt tt", f.l1), ParseError);
    try {
        parse_formula("and(tt, <zz>tt)", f.l1, 7);
        FAIL("unknown label must be rejected");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
        CHECK(e.column() > 1);
    }
}

TEST_CASE("atoms reject overlapping must and must-not sets") {
    CHECK_THROWS_AS(AtomicObs({0}, {0}), Error);
}

TEST_CASE("canonical sorts, dedupes and collapses") {
    Fix f;
    Observable da = Observable::diamond(f.a, Observable::top());
    Observable db = Observable::diamond(f.b, Observable::top());
    Observable messy = Observable::conj({db, da, db});
    Observable canon = canonical(messy);
    REQUIRE(canon.kind() == Observable::Kind::Conj);
    REQUIRE(canon.children().size() == 2);
    CHECK(canon.children()[0] == da);
    CHECK(canon.children()[1] == db);

    CHECK(canonical(Observable::conj({da})) == da);
    CHECK(canonical(Observable::conj({da, da})) == da);
    CHECK(canonical(Observable::top()).is_top());

    // canonicalization never changes satisfaction
    auto rng = testgen::rng_for(34);
    for (int i = 0; i < 20; ++i) {
        Lts lts = testgen::random_lts(rng);
        for (int k = 0; k < 10; ++k) {
            Observable th = testgen::random_observable(rng, lts, 3);
            Observable cn = canonical(th);
            for (StateId p = 0; p < lts.state_count(); ++p)
                CHECK(sat(lts, p, th) == sat(lts, p, cn));
        }
    }
}

TEST_CASE("downward closure collects subformulas") {
    Fix f;
    Observable ab = Observable::diamond(f.a, Observable::diamond(f.b, Observable::top()));
    auto closed = downward_close({ab});
    REQUIRE(closed.size() == 3);
    CHECK(std::find(closed.begin(), closed.end(), Observable::top()) != closed.end());
    CHECK(std::find(closed.begin(), closed.end(),
                    Observable::diamond(f.b, Observable::top())) != closed.end());
    CHECK(std::find(closed.begin(), closed.end(), ab) != closed.end());

    auto top_only = downward_close({Observable::top()});
    CHECK(top_only == std::vector<Observable>{Observable::top()});

    Observable mix = Observable::conj(
        {Observable::diamond(f.a, Observable::top()), Observable::refusal(f.b)});
    auto closed2 = downward_close({mix});
    CHECK(closed2.size() == 4);  // the conj, diamond, refusal, tt

    // closure never increases weight
    for (const Observable& th : closed2) CHECK(weight(th) <= weight(mix));
}

TEST_CASE("printing and reparsing formulas is stable") {
    auto rng = testgen::rng_for(35);
    for (int i = 0; i < 20; ++i) {
        Lts lts = testgen::random_lts(rng);
        for (int k = 0; k < 20; ++k) {
            Observable th = testgen::random_observable(rng, lts, 3);
            const std::string text = print_formula(th, lts);
            Observable back = parse_formula(text, lts);
            CHECK(back == th);
            CHECK(print_formula(back, lts) == text);
        }
    }
}

TEST_CASE("obs files carry line numbers and comments") {
    Fix f;
    auto entries = parse_obs_file("# traces\n<a>tt\n\nand(tt, tt)\n", f.l1);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].first == 2);
    CHECK(entries[1].first == 4);
    CHECK(entries[0].second == Observable::diamond(f.a, Observable::top()));
}
