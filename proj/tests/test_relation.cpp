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

#include <set>
#include <utility>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "uptoind/errors.hpp"
#include "uptoind/relation.hpp"

using namespace uptoind;

namespace {

// Composition by the definition, three nested loops.
Relation compose_naive(const Relation& a, const Relation& b) {
    Relation out(a.dim());
    for (StateId p = 0; p < a.dim(); ++p)
        for (StateId q = 0; q < a.dim(); ++q)
            for (StateId r = 0; r < a.dim(); ++r)
                if (a.contains(p, q) && b.contains(q, r)) out.add(p, r);
    return out;
}

}  // namespace

TEST_CASE("relation basics") {
    Relation r(4);
    CHECK(r.dim() == 4);
    CHECK(r.size() == 0);
    r.add(1, 3);
    r.add(0, 0);
    CHECK(r.contains(1, 3));
    CHECK(!r.contains(3, 1));
    CHECK(r.size() == 2);
    r.remove(1, 3);
    CHECK(!r.contains(1, 3));
    CHECK(r.size() == 1);
}

TEST_CASE("relation constants") {
    CHECK(Relation::full(3).size() == 9);
    CHECK(Relation::empty(3).size() == 0);
    CHECK(Relation::identity(3).size() == 3);
    CHECK(Relation::identity(3).contains(2, 2));
    CHECK(!Relation::identity(3).contains(2, 1));
    CHECK(Relation::identity(3).is_reflexive());
    CHECK(Relation::identity(3).is_transitive());
    CHECK(Relation::full(1).size() == 1);

    // a dim > 64 relation crosses word boundaries
    Relation big = Relation::full(70);
    CHECK(big.size() == 4900u);
    CHECK(big.contains(69, 69));
    big.remove(69, 64);
    CHECK(!big.contains(69, 64));
    CHECK(big.size() == 4899u);
}

TEST_CASE("subset, meet, join") {
    auto rng = testgen::rng_for(11);
    for (int i = 0; i < 30; ++i) {
        const std::uint32_t dim = testgen::pick(rng, 1, 9);
        Relation a = testgen::random_relation(rng, dim, 0.3);
        Relation b = testgen::random_relation(rng, dim, 0.3);
        Relation meet = a & b;
        Relation join = a | b;
        CHECK(meet.subset_of(a));
        CHECK(meet.subset_of(b));
        CHECK(a.subset_of(join));
        CHECK(b.subset_of(join));
        CHECK(meet.subset_of(join));
        for (StateId p = 0; p < dim; ++p)
            for (StateId q = 0; q < dim; ++q) {
                CHECK(meet.contains(p, q) == (a.contains(p, q) && b.contains(p, q)));
                CHECK(join.contains(p, q) == (a.contains(p, q) || b.contains(p, q)));
            }
    }
}

TEST_CASE("compose matches the definition") {
    auto rng = testgen::rng_for(12);
    for (int i = 0; i < 30; ++i) {
        const std::uint32_t dim = testgen::pick(rng, 1, 8);
        Relation a = testgen::random_relation(rng, dim, 0.35);
        Relation b = testgen::random_relation(rng, dim, 0.35);
        CHECK(a.compose(b) == compose_naive(a, b));
    }
    // identity laws
    Relation a = testgen::random_relation(rng, 6, 0.4);
    CHECK(a.compose(Relation::identity(6)) == a);
    CHECK(Relation::identity(6).compose(a) == a);
}

TEST_CASE("transpose is an involution and flips pairs") {
    auto rng = testgen::rng_for(13);
    Relation a = testgen::random_relation(rng, 7, 0.3);
    Relation t = a.transpose();
    for (StateId p = 0; p < 7; ++p)
        for (StateId q = 0; q < 7; ++q) CHECK(t.contains(q, p) == a.contains(p, q));
    CHECK(t.transpose() == a);
}

TEST_CASE("reflexive transitive closure") {
    Relation r(4);
    r.add(0, 1);
    r.add(1, 2);
    Relation c = r.reflexive_transitive_closure();
    CHECK(c.contains(0, 2));
    CHECK(c.contains(3, 3));
    CHECK(c.is_reflexive());
    CHECK(c.is_transitive());
    CHECK(!c.contains(2, 0));

    auto rng = testgen::rng_for(14);
    for (int i = 0; i < 20; ++i) {
        Relation a = testgen::random_relation(rng, 6, 0.2);
        Relation star = a.reflexive_transitive_closure();
        CHECK(a.subset_of(star));
        CHECK(star.is_reflexive());
        CHECK(star.is_transitive());
        CHECK(star.reflexive_transitive_closure() == star);
        CHECK(star.compose(star).subset_of(star));
    }
}

TEST_CASE("first_not_in and pairs") {
    Relation a(3), b(3);
    a.add(0, 2);
    a.add(2, 1);
    b.add(0, 2);
    auto missing = a.first_not_in(b);
    REQUIRE(missing.has_value());
    CHECK(missing->first == 2);
    CHECK(missing->second == 1);
    CHECK(!a.first_not_in(a).has_value());

    auto ps = a.pairs();
    REQUIRE(ps.size() == 2);
    CHECK(ps[0] == std::pair<StateId, StateId>{0, 2});
    CHECK(ps[1] == std::pair<StateId, StateId>{2, 1});

    std::set<std::pair<StateId, StateId>> seen;
    a.for_each([&](StateId p, StateId q) { seen.insert({p, q}); });
    CHECK(seen == std::set<std::pair<StateId, StateId>>(ps.begin(), ps.end()));
}

TEST_CASE("rel file parsing resolves names and indices") {
    auto [lts, off] = testfix::l1_beside_l2();
    Relation r = parse_rel("s0 t0\n# comment\n\ns1 t1\n", lts);
    CHECK(r.size() == 2);
    CHECK(r.contains(0, off + 0));
    CHECK(r.contains(1, off + 1));

    // indices also resolve
    Relation by_index = parse_rel("0 5\n", lts);
    CHECK(by_index.contains(0, 5));

    // round trip through the serialized form
    CHECK(parse_rel(serialize_rel(r, lts), lts) == r);

    CHECK_THROWS_AS(parse_rel("s0\n", lts), ParseError);
    CHECK_THROWS_AS(parse_rel("s0 nope\n", lts), ParseError);
    CHECK_THROWS_AS(parse_rel("s0 t0 extra\n", lts), ParseError);
    try {
        parse_rel("s0 t0\nbad line here\n", lts);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}
