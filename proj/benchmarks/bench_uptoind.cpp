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

#include <benchmark/benchmark.h>

#include <random>
#include <tuple>
#include <vector>

#include "uptoind/certify.hpp"

using namespace uptoind;

namespace {

Lts random_system(std::uint32_t states, std::uint32_t actions, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> labels;
    for (std::uint32_t a = 0; a < actions; ++a) labels.emplace_back(1, char('a' + a));
    std::vector<std::tuple<StateId, ActionId, StateId>> trans;
    for (StateId s = 0; s < states; ++s) {
        const std::uint32_t fanout = rng() % 3;
        for (std::uint32_t k = 0; k < fanout; ++k)
            trans.emplace_back(s, ActionId(rng() % actions), StateId(rng() % states));
    }
    return Lts(states, labels, trans);
}

Relation random_rel(std::uint32_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Relation r(dim);
    for (StateId p = 0; p < dim; ++p)
        for (StateId q = 0; q < dim; ++q)
            if (rng() % 4 == 0) r.add(p, q);
    return r;
}

void BM_RelationCompose(benchmark::State& state) {
    const auto dim = static_cast<std::uint32_t>(state.range(0));
    Relation a = random_rel(dim, 1);
    Relation b = random_rel(dim, 2);
    for (auto _ : state) benchmark::DoNotOptimize(a.compose(b));
}
BENCHMARK(BM_RelationCompose)->Arg(64)->Arg(256)->Arg(1024);

void BM_RelationClosure(benchmark::State& state) {
    const auto dim = static_cast<std::uint32_t>(state.range(0));
    Relation a = random_rel(dim, 3);
    for (auto _ : state) benchmark::DoNotOptimize(a.reflexive_transitive_closure());
}
BENCHMARK(BM_RelationClosure)->Arg(64)->Arg(256)->Arg(1024);

void BM_Approximant(benchmark::State& state) {
    const Family fam = all_families[static_cast<std::size_t>(state.range(0))];
    Lts lts = random_system(40, 3, 7);
    for (auto _ : state) benchmark::DoNotOptimize(approximant(lts, fam, 4));
}
BENCHMARK(BM_Approximant)->DenseRange(0, 5)->Unit(benchmark::kMicrosecond);

void BM_Preorder(benchmark::State& state) {
    const Family fam = all_families[static_cast<std::size_t>(state.range(0))];
    Lts lts = random_system(40, 3, 7);
    for (auto _ : state) benchmark::DoNotOptimize(preorder(lts, fam));
}
BENCHMARK(BM_Preorder)->DenseRange(0, 5)->Unit(benchmark::kMicrosecond);

void BM_Certify(benchmark::State& state) {
    UptoEnv env = UptoEnv::for_lts(random_system(30, 3, 11));
    Relation g = Relation::full(env.lts.state_count());
    for (;;) {
        Relation next = s_theta(env.lts, Family::Simulation, g);
        if (next == g) break;
        g = next;
    }
    env.constants["G"] = g;
    UptoTerm t = parse_upto("union(id, const(G))");
    for (auto _ : state)
        benchmark::DoNotOptimize(certify(env, Family::Simulation, g, t, 6));
}
BENCHMARK(BM_Certify)->Unit(benchmark::kMicrosecond);

void BM_ProcessUnfold(benchmark::State& state) {
    CcsTerm t = parse_ccs("a.b.0 | b.c.0 | c.a.0 | a.0 + b.0");
    for (auto _ : state) benchmark::DoNotOptimize(sos_lts({t}, 100000));
}
BENCHMARK(BM_ProcessUnfold)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
