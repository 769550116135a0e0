#include <benchmark/benchmark.h>

#include <vector>

#include "mabea/bandit.hpp"
#include "mabea/evolution.hpp"
#include "mabea/experiment.hpp"
#include "mabea/simulator.hpp"

namespace {

using namespace mabea;

std::vector<ArmState> skewed_arms(std::size_t k) {
    std::vector<ArmState> arms;
    for (std::size_t i = 0; i < k; ++i) arms.emplace_back(25 + i, 475 - i);
    return arms;
}

class TableSource final : public RewardSource {
public:
    TableSource(std::vector<double> rates, std::uint64_t seed) : rates_(std::move(rates)), rng_(seed) {}
    bool pull(std::size_t arm) override { return rng_.bernoulli(rates_[arm]); }

private:
    std::vector<double> rates_;
    Rng rng_;
};

void BM_BetaDraw(benchmark::State& state) {
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(rng.beta(26.0, 476.0));
}
BENCHMARK(BM_BetaDraw);

void BM_TsSelect(benchmark::State& state) {
    const auto arms = skewed_arms(static_cast<std::size_t>(state.range(0)));
    Rng rng(2);
    for (auto _ : state) benchmark::DoNotOptimize(ts_select(arms, rng));
}
BENCHMARK(BM_TsSelect)->Arg(20);

void BM_Ucb1Select(benchmark::State& state) {
    const auto arms = skewed_arms(static_cast<std::size_t>(state.range(0)));
    const SharedState shared{10'000};
    for (auto _ : state) benchmark::DoNotOptimize(ucb1_select(arms, shared));
}
BENCHMARK(BM_Ucb1Select)->Arg(20);

void BM_SrRun(benchmark::State& state) {
    const std::vector<double> rates(20, 0.05);
    for (auto _ : state) {
        std::vector<ArmState> arms(20);
        SharedState shared;
        TableSource source(rates, 3);
        benchmark::DoNotOptimize(sr_run(arms, shared, 10'000, source));
    }
}
BENCHMARK(BM_SrRun);

void BM_MabEaRun(benchmark::State& state) {
    const EffectTable table = generate_table(reference_space(), 0.05, -0.01, 0.01, 7);
    EvolutionConfig cfg;
    cfg.policy = static_cast<Policy>(state.range(0));
    cfg.generations = 1;
    std::uint64_t index = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_replication(cfg, table, 11, index++));
    state.SetLabel(std::string(to_string(cfg.policy)));
}
BENCHMARK(BM_MabEaRun)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
