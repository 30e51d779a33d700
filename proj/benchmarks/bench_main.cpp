#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "samgsr/classifier.hpp"
#include "samgsr/metrics.hpp"
#include "samgsr/parallel.hpp"
#include "samgsr/permutation.hpp"
#include "samgsr/random.hpp"
#include "samgsr/reduction.hpp"

namespace {

using namespace samgsr;

ExpressionDataset make_dataset(std::size_t genes, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<std::string> gene_ids, sample_ids, labels;
  for (std::size_t g = 0; g < genes; ++g) gene_ids.push_back("g" + std::to_string(g));
  for (std::size_t s = 0; s < samples; ++s) {
    sample_ids.push_back("s" + std::to_string(s));
    labels.push_back(s < samples / 2 ? "A" : "B");
  }
  std::vector<double> values(genes * samples);
  for (std::size_t g = 0; g < genes; ++g) {
    for (std::size_t s = 0; s < samples; ++s) {
      values[g * samples + s] = normal(rng) + (g < 10 && labels[s] == "B" ? 1.0 : 0.0);
    }
  }
  return {gene_ids, sample_ids, values, labels};
}

GeneSetCollection make_sets(const ExpressionDataset& data, std::size_t sets, std::size_t size) {
  std::vector<GeneSet> out;
  for (std::size_t k = 0; k < sets; ++k) {
    GeneSet set{"S" + std::to_string(k), "", {}};
    for (std::size_t i = 0; i < size; ++i) set.genes.push_back(data.gene_ids()[(k * 7 + i) % data.gene_count()]);
    out.push_back(std::move(set));
  }
  return GeneSetCollection(std::move(out));
}

void BM_SetPValues(benchmark::State& state) {
  set_default_threads(1);
  const auto data = make_dataset(500, 60, 1);
  const auto sets = make_sets(data, 20, static_cast<std::size_t>(state.range(0)));
  const auto plan = build_plan(data.labels(), 1000, 2);
  for (auto _ : state) benchmark::DoNotOptimize(set_pvalues(data, sets, plan, {}));
  state.SetItemsProcessed(state.iterations() * 20);
}
BENCHMARK(BM_SetPValues)->Arg(10)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_RunSamgsr(benchmark::State& state) {
  set_default_threads(1);
  const auto data = make_dataset(400, 40, 3);
  const auto sets = make_sets(data, 10, 30);
  SamgsrConfig config;
  config.alpha = 0.5;
  config.permutations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_samgsr(data, sets, nullptr, config));
}
BENCHMARK(BM_RunSamgsr)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Aupr(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  std::uniform_real_distribution<double> u;
  std::vector<double> scores(n);
  std::vector<std::uint8_t> positive(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = u(rng);
    positive[i] = u(rng) < 0.3;
  }
  positive[0] = 1;
  for (auto _ : state) benchmark::DoNotOptimize(aupr_scores(scores, positive));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Aupr)->Arg(100)->Arg(10000);

void BM_FitClassifier(benchmark::State& state) {
  const auto data = make_dataset(200, 80, 5);
  std::vector<std::string> genes(data.gene_ids().begin(), data.gene_ids().begin() + state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_classifier(data, genes));
}
BENCHMARK(BM_FitClassifier)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
