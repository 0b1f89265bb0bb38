// Copyright 2026 The tcqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "tcqkd/adversary.hpp"
#include "tcqkd/postproc.hpp"
#include "tcqkd/protocols.hpp"

namespace {

using namespace tcqkd;

tcqkd::Bits random_bits(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    tcqkd::Bits b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(gen() & 1);
    return b;
}

void BM_RunSession(benchmark::State& state) {
    SessionConfig c;
    c.protocol = kAllProtocols[static_cast<std::size_t>(state.range(0))];
    c.num_states = 10000;
    for (auto _ : state) {
        c.rng_seed++;
        benchmark::DoNotOptimize(run_session(c));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.num_states));
    state.SetLabel(std::string(to_string(c.protocol)));
}
BENCHMARK(BM_RunSession)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_RunSessionAttacked(benchmark::State& state) {
    SessionConfig c;
    c.protocol = ProtocolId::Ghz1;
    c.num_states = 10000;
    c.attack = state.range(0) == 0 ? AttackModel{InterceptResend{}} : AttackModel{AncillaEntangle{0.5}};
    for (auto _ : state) {
        c.rng_seed++;
        benchmark::DoNotOptimize(run_session(c));
    }
    state.SetLabel(attack_kind(c.attack).data());
}
BENCHMARK(BM_RunSessionAttacked)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PredictAttack(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(predict_attack(ProtocolId::Ghz2, InterceptResend{}));
}
BENCHMARK(BM_PredictAttack);

void BM_ToeplitzHash(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto key = random_bits(n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(toeplitz_hash(key, n / 2, 7));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ToeplitzHash)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oNSquared);

void BM_Reconcile(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_bits(n, 2);
    auto b = a;
    std::mt19937_64 gen(3);
    for (std::size_t i = 0; i < n / 20; ++i) b[gen() % n] ^= 1;
    const auto block = cascade_block_size(0.05, n);
    for (auto _ : state) benchmark::DoNotOptimize(reconcile(a, b, kReconcilePasses, block, 4));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Reconcile)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

}  // namespace

BENCHMARK_MAIN();
