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
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "uptoind/certify.hpp"
#include "uptoind/errors.hpp"

using namespace uptoind;

namespace {

struct Fix {
    UptoEnv env;
    StateId off;
    Relation d;

    Fix() {
        auto [u, o] = testfix::l1_beside_l2();
        off = o;
        env = UptoEnv::for_lts(std::move(u));
        d = Relation(env.lts.state_count());
        d.add(1, off + 1);
        d.add(3, off + 1);
        d.add(2, off + 2);
        d.add(4, off + 3);
        env.constants["D"] = d;
    }
};

}  // namespace

TEST_CASE("one-step transfer checks transitions") {
    Fix f;
    Relation r(f.env.lts.state_count());
    r.add(0, f.off);
    // no successor pairs provided: the a move of the left root fails
    auto w = semi_progress(f.env.lts, r, Relation::empty(f.env.lts.state_count()));
    REQUIRE(w.has_value());
    CHECK(w->p == 0);
    CHECK(w->q == f.off);
    CHECK(f.env.lts.action_label(w->action) == "a");

    // with the derivative pairs present the obligation discharges
    Relation s = f.d;
    CHECK(!semi_progress(f.env.lts, r, s).has_value());
}

TEST_CASE("the family functional combines moves and atoms") {
    Fix f;
    const Lts& u = f.env.lts;
    const Relation full = Relation::full(u.state_count());

    // on the full relation only the enabled sets matter
    Relation sim1 = s_theta(u, Family::Simulation, full);
    Relation fail1 = s_theta(u, Family::Failure, full);
    Relation ready1 = s_theta(u, Family::Ready, full);
    for (StateId p = 0; p < u.state_count(); ++p)
        for (StateId q = 0; q < u.state_count(); ++q) {
            const auto& ep = u.enabled(p);
            const auto& eq = u.enabled(q);
            const bool p_in_q = std::includes(eq.begin(), eq.end(), ep.begin(), ep.end());
            const bool q_in_p = std::includes(ep.begin(), ep.end(), eq.begin(), eq.end());
            CHECK(sim1.contains(p, q) == p_in_q);
            CHECK(fail1.contains(p, q) == (p_in_q && q_in_p));
            CHECK(ready1.contains(p, q) == (ep == eq));
        }

    // iterating the simulation functional from the top is the preorder
    Relation x = full;
    for (;;) {
        Relation next = s_theta(u, Family::Simulation, x);
        if (next == x) break;
        x = next;
    }
    CHECK(x == preorder(u, Family::Simulation));

    // monotone in the argument
    auto rng = testgen::rng_for(81);
    for (int i = 0; i < 20; ++i) {
        Relation small = testgen::random_relation(rng, u.state_count(), 0.2);
        Relation big = small | testgen::random_relation(rng, u.state_count(), 0.2);
        for (Family fam : all_families)
            CHECK(s_theta(u, fam, small).subset_of(s_theta(u, fam, big)));
    }
}

TEST_CASE("a committed root simulates into a deferred one") {
    Fix f;
    Relation r(f.env.lts.state_count());
    r.add(0, f.off);

    Certificate cert = certify(f.env, Family::Simulation, r, parse_upto("const(D)"), 8);
    CHECK(cert.status == Certificate::Status::Accepted);
    CHECK(cert.total);
    CHECK(cert.wp_structural);
    CHECK(cert.rejection_reason.empty());
    REQUIRE(cert.below_meet.has_value());
    CHECK(cert.below_meet->certified);
    REQUIRE(cert.obligations.size() == 2);  // the two a-moves of the left root
    for (const auto& ob : cert.obligations) CHECK(ob.q_succ.has_value());

    // the claim is real: the pair is in the preorder
    CHECK(f.env.preorder_of(Family::Simulation).contains(0, f.off));
}

TEST_CASE("the reverse direction is rejected with a stuck move") {
    Fix f;
    Relation r(f.env.lts.state_count());
    r.add(f.off, 0);

    Certificate cert = certify(f.env, Family::Simulation, r, parse_upto("const(D)"), 8);
    CHECK(cert.status == Certificate::Status::Rejected);
    REQUIRE(cert.progress_failure.has_value());
    CHECK(cert.progress_failure->p == f.off);
    CHECK(!cert.rejection_reason.empty());
    CHECK(!cert.below_meet.has_value());
}

TEST_CASE("atom compliance rejects before any move is checked") {
    Fix f;
    Relation r(f.env.lts.state_count());
    r.add(1, f.off + 1);  // left refuses c, right does not

    Certificate cert = certify(f.env, Family::Failure, r, parse_upto("id"), 6);
    CHECK(cert.status == Certificate::Status::Rejected);
    REQUIRE(cert.compliance_failure.has_value());
    CHECK(cert.compliance_failure->p == 1);
    CHECK(sat(f.env.lts, 1, cert.compliance_failure->atom));
    CHECK(!sat(f.env.lts, f.off + 1, cert.compliance_failure->atom));
    CHECK(cert.obligations.empty());
}

TEST_CASE("an empty relation certifies vacuously") {
    Fix f;
    for (Family fam : all_families) {
        Certificate cert =
            certify(f.env, fam, Relation(f.env.lts.state_count()), parse_upto("id"), 4);
        CHECK(cert.status == Certificate::Status::Accepted);
        CHECK(cert.obligations.empty());
    }
}

TEST_CASE("a deterministic implementation refines its specification") {
    // left does a then b; right may also take an a branch into c
    Lts impl = parse_aut("des (0,2,3)\n(0,\"a\",1)\n(1,\"b\",2)\n");
    Lts spec2 = parse_aut("des (0,4,5)\n(0,\"a\",1)\n(1,\"b\",2)\n(0,\"a\",3)\n(3,\"c\",4)\n");
    auto [u, off] = disjoint_union(impl, spec2);
    UptoEnv env = UptoEnv::for_lts(std::move(u));

    Relation r(env.lts.state_count());
    r.add(0, off + 0);
    r.add(1, off + 1);
    r.add(2, off + 2);

    Certificate cert = certify(env, Family::Failure, r, parse_upto("id"), 6);
    CHECK(cert.status == Certificate::Status::Accepted);
    CHECK(cert.total);
    CHECK(env.preorder_of(Family::Failure).contains(0, off));

    // the same relation also certifies up to path closure
    Certificate star_cert = certify(env, Family::Failure, r, parse_upto("star(id)"), 6);
    CHECK(star_cert.status == Certificate::Status::Accepted);
}

TEST_CASE("soundness holds even where the method is incomplete") {
    Fix f;
    // the deferred root is below the committed one in the failure preorder,
    // but no one-step argument witnesses it: after matching a, the branch
    // state offers both b and c while each committed branch offers only one,
    // so some move is always stuck
    REQUIRE(f.env.preorder_of(Family::Failure).contains(f.off, 0));
    Relation r(f.env.lts.state_count());
    r.add(f.off, 0);
    r.add(f.off + 1, 1);
    r.add(f.off + 1, 3);
    r.add(f.off + 2, 2);
    r.add(f.off + 3, 4);
    Certificate cert = certify(f.env, Family::Failure, r, parse_upto("id"), 6);
    CHECK(cert.status == Certificate::Status::Rejected);
    REQUIRE(cert.progress_failure.has_value());
    CHECK(cert.progress_failure->p == f.off + 1);
}

TEST_CASE("context closure certifies prefixed process pairs") {
    auto defs = parse_ccs_file("B = b.0\nBC = b.0 + c.0\nL = a.b.0\nR = a.(b.0 + c.0)\nZ = 0\n");
    std::vector<CcsTerm> seeds;
    for (auto& [name, term] : defs) seeds.push_back(term);
    // one closure round is enough for a single application of a.[]
    for (const CcsTerm& ctx : {parse_ccs("a.[]")})
        for (const auto& [name, term] : defs) seeds.push_back(subst_hole(ctx, term));
    SosResult sos = sos_lts(seeds);
    UptoEnv env = UptoEnv::for_processes(std::move(sos));
    env.contexts["C"] = {parse_ccs("a.[]")};

    Relation r(env.lts.state_count());
    const StateId b = env.state_ids.at(normal_form(parse_ccs("b.0")));
    const StateId bc = env.state_ids.at(normal_form(parse_ccs("b.0 + c.0")));
    const StateId z = env.state_ids.at(normal_form(parse_ccs("0")));
    r.add(b, bc);
    r.add(z, z);

    UptoTerm t = parse_upto("union(id, ctx(C))");
    Certificate cert = certify(env, Family::Simulation, r, t, 8);
    CHECK(cert.status == Certificate::Status::Accepted);
    CHECK(!cert.wp_structural);  // context closure is only checkable, not derivable
    REQUIRE(cert.wp_report.has_value());
    CHECK(cert.wp_report->passed);

    // the certified relation and its closure land inside the preorder, so
    // the prefixed pair follows
    const StateId l = env.state_ids.at(normal_form(parse_ccs("a.b.0")));
    const StateId rr = env.state_ids.at(normal_form(parse_ccs("a.(b.0 + c.0)")));
    Relation image = eval_upto(t, r, env);
    CHECK(image.contains(l, rr));
    const auto sim = oracle::naive_simulation(env.lts);
    CHECK(sim.count({l, rr}) == 1);
    CHECK(env.preorder_of(Family::Simulation).contains(l, rr));
}

TEST_CASE("certificates render as text and json") {
    Fix f;
    Relation r(f.env.lts.state_count());
    r.add(0, f.off);
    Certificate cert = certify(f.env, Family::Simulation, r, parse_upto("const(D)"), 8);
    REQUIRE(cert.status == Certificate::Status::Accepted);

    const std::string text = cert.to_text(f.env.lts);
    CHECK(text.find("accepted") != std::string::npos);
    CHECK(text.find("s0") != std::string::npos);
    CHECK(text.find("matched by") != std::string::npos);

    auto j = nlohmann::json::parse(cert.to_json(f.env.lts));
    CHECK(j["schema"] == "uptoind.certificate.v1");
    CHECK(j["status"] == "accepted");
    CHECK(j["total"] == true);
    CHECK(j["family"] == "simulation");
    CHECK(j["obligations"].size() == cert.obligations.size());
    CHECK(j["relation"].size() == 1);

    Relation bad(f.env.lts.state_count());
    bad.add(f.off, 0);
    Certificate rej = certify(f.env, Family::Simulation, bad, parse_upto("const(D)"), 8);
    auto jr = nlohmann::json::parse(rej.to_json(f.env.lts));
    CHECK(jr["status"] == "rejected");
    CHECK(!jr["rejection_reason"].get<std::string>().empty());
    CHECK(rej.to_text(f.env.lts).find("rejected") != std::string::npos);
}

TEST_CASE("certified relations always sit inside the preorder") {
    auto rng = testgen::rng_for(82);
    int accepted = 0;
    for (int i = 0; i < 60; ++i) {
        Lts lts = testgen::random_lts(rng, 4, 2);
        UptoEnv env = UptoEnv::for_lts(std::move(lts));
        const Family fam = all_families[i % all_families.size()];

        UptoTerm t = parse_upto("id");
        Relation r(env.lts.state_count());
        if (i % 3 == 0) {
            // subsets of the functional's greatest fixed point progress into
            // it, so these instances exercise the accept path
            Relation g = Relation::full(env.lts.state_count());
            for (;;) {
                Relation next = s_theta(env.lts, fam, g);
                if (next == g) break;
                g = next;
            }
            env.constants["G"] = g;
            r = testgen::random_subrelation(rng, g, 0.7);
            t = parse_upto("union(id, const(G))");
        } else {
            r = testgen::random_relation(rng, env.lts.state_count(), 0.3);
            t = i % 2 == 0 ? parse_upto("union(id, star(id))") : parse_upto("id");
        }

        Certificate cert = certify(env, fam, r, t, 5);
        if (i % 3 == 0) CHECK(cert.status == Certificate::Status::Accepted);
        if (cert.status == Certificate::Status::Accepted) {
            ++accepted;
            CHECK(r.first_not_in(env.preorder_of(fam)) == std::nullopt);
        }
    }
    CHECK(accepted >= 20);
}
