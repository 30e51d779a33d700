#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "samgsr/error.hpp"
#include "samgsr/reduction.hpp"

namespace samgsr {
namespace {

using testing::random_collection;
using testing::random_dataset;

SetReduction profile_of(std::vector<double> residual) {
  SetReduction r;
  r.set_name = "S";
  for (std::size_t i = 0; i <= residual.size(); ++i) {
    r.ordered_genes.push_back("x" + std::to_string(i));
    r.ordered_statistic.push_back(10.0 - static_cast<double>(i));
  }
  r.residual_p = std::move(residual);
  return r;
}

TEST(SetReduction, StrictStoppingRule) {
  const auto r = profile_of({0.5, 0.2, 0.7});
  const auto at_equal = r.at(0.5);
  EXPECT_EQ(at_equal.stop_k, 3u);
  EXPECT_EQ(at_equal.c_values, (std::vector<double>{0.5, 0.2, 0.7}));
  const auto below = r.at(0.4);
  EXPECT_EQ(below.stop_k, 1u);
  EXPECT_EQ(below.core, (std::vector<std::string>{"x0"}));
  const auto all = r.at(0.8);
  EXPECT_TRUE(all.exhausted);
  EXPECT_EQ(all.core.size(), 4u);
}

TEST(ScreenSets, ThresholdAndOrdering) {
  SetPValueTable t;
  t.rows = {{"b", 2, 1.0, 0.01, 99}, {"a", 2, 1.0, 0.01, 99}, {"c", 2, 1.0, 0.2, 99}, {"d", 2, 1.0, 0.001, 99}};
  auto kept = screen_sets(t, 0.05);
  ASSERT_EQ(kept.size(), 3u);
  EXPECT_EQ(kept[0].set_name, "d");
  EXPECT_EQ(kept[1].set_name, "a");
  EXPECT_EQ(kept[2].set_name, "b");
  EXPECT_EQ(screen_sets(t, 1.0).size(), 4u);
  EXPECT_THROW(screen_sets(t, 0.0), ConfigError);
}

TEST(ReduceSet, ImmediateStopGivesSingleGeneCore) {
  // One very strong gene plus null genes: removing it leaves a null residual.
  Rng rng(12);
  auto d = random_dataset(rng, 8, 30, 15, 1, 6.0);
  const auto plan = build_plan(d.labels(), 400, 3);
  const GeneSet set{"S", "", {"g004", "g001", "g002", "g003"}};
  const auto trace = reduce_set(d, set, plan, {}, 0.05);
  EXPECT_EQ(trace.ordered_genes.front(), "g001");
  EXPECT_EQ(trace.core, (std::vector<std::string>{"g001"}));
  EXPECT_GT(trace.c_values.front(), 0.05);
}

TEST(ReduceSet, IdenticalRowsTieByName) {
  Rng rng(13);
  auto base = random_dataset(rng, 4, 10, 5, 1, 2.0);
  std::vector<double> v = base.values();
  std::copy(v.begin(), v.begin() + 10, v.begin() + 10);  // g002 := g001
  const ExpressionDataset d({"zeta", "alpha", "g3", "g4"}, base.sample_ids(), v, base.labels());
  const auto plan = build_plan(d.labels(), 200, 1);
  const auto trace = reduce_set(d, {"S", "", {"zeta", "alpha", "g3"}}, plan, {}, 0.5);
  EXPECT_EQ(trace.ordered_genes[0], "alpha");
  EXPECT_EQ(trace.ordered_genes[1], "zeta");
  EXPECT_EQ(trace.tied_pairs, 1u);
}

TEST(ReduceSet, PrefixAndMonotonicityOnRandomInstances) {
  Rng rng(77);
  const std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (int instance = 0; instance < 25; ++instance) {
    auto d = random_dataset(rng, 40, 16, 8, 5, 1.0);
    const auto coll = random_collection(rng, d.gene_ids(), 4, 3, 12);
    SamgsrConfig cfg;
    cfg.alpha = 1.0;
    cfg.permutations = 150;
    cfg.seed = static_cast<std::uint64_t>(instance);
    const auto profile = profile_samgsr(d, coll, nullptr, cfg);
    std::vector<std::size_t> previous(coll.size(), 0);
    for (const double c : grid) {
      const auto result = profile.at(c);
      for (std::size_t k = 0; k < result.traces.size(); ++k) {
        const auto& t = result.traces[k];
        ASSERT_FALSE(t.core.empty());
        EXPECT_TRUE(std::equal(t.core.begin(), t.core.end(), t.ordered_genes.begin()));
        for (std::size_t i = 1; i < t.ordered_statistic.size(); ++i) {
          EXPECT_GE(std::fabs(t.ordered_statistic[i - 1]), std::fabs(t.ordered_statistic[i]));
        }
        EXPECT_GE(t.core.size(), previous[k]);
        previous[k] = t.core.size();
      }
    }
  }
}

TEST(RunSamgsr, MatchesPerSetReduction) {
  Rng rng(5);
  auto d = random_dataset(rng, 60, 20, 10, 6, 1.2);
  const auto coll = random_collection(rng, d.gene_ids(), 5, 4, 15);
  SamgsrConfig cfg;
  cfg.alpha = 1.0;
  cfg.c_star = 0.3;
  cfg.permutations = 200;
  const auto result = run_samgsr(d, coll, nullptr, cfg);
  const auto plan = build_plan(d.labels(), 200, cfg.seed);
  for (const auto& trace : result.traces) {
    EXPECT_EQ(trace, reduce_set(d, *coll.find(trace.set_name), plan, {}, 0.3));
  }
  std::set<std::string> union_of_cores;
  for (const auto& trace : result.traces) union_of_cores.insert(trace.core.begin(), trace.core.end());
  const auto names = result.signature.gene_names();
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()), union_of_cores);
  for (std::size_t i = 1; i < result.signature.size(); ++i) {
    EXPECT_GE(std::fabs(result.signature.genes[i - 1].statistic), std::fabs(result.signature.genes[i].statistic));
  }
  EXPECT_EQ(result, run_samgsr(d, coll, nullptr, cfg));
}

TEST(RunSamgsr, NothingPassesScreening) {
  Rng rng(6);
  auto d = random_dataset(rng, 30, 20, 10);
  const auto coll = random_collection(rng, d.gene_ids(), 3, 4, 10);
  SamgsrConfig cfg;
  cfg.alpha = 1e-6;
  cfg.permutations = 100;
  const auto result = run_samgsr(d, coll, nullptr, cfg);
  EXPECT_TRUE(result.signature.empty());
  EXPECT_TRUE(result.screened_sets.empty());
  EXPECT_FALSE(result.warnings.empty());
}

TEST(RunSamgsr, WeightedNeedsGraphAndRegularGraphCollapses) {
  Rng rng(8);
  auto d = random_dataset(rng, 50, 24, 12, 6, 1.0);
  const auto coll = random_collection(rng, d.gene_ids(), 5, 4, 15);
  SamgsrConfig cfg;
  cfg.alpha = 0.5;
  cfg.permutations = 200;
  cfg.weighted = true;
  EXPECT_THROW(run_samgsr(d, coll, nullptr, cfg), ConfigError);
  const auto graph = build_graph(testing::regular_edges(d.gene_ids(), 2), d.gene_ids()).graph;
  const auto weighted = run_samgsr(d, coll, &graph, cfg);
  cfg.weighted = false;
  const auto plain = run_samgsr(d, coll, nullptr, cfg);
  EXPECT_EQ(weighted.signature.gene_names(), plain.signature.gene_names());
  EXPECT_EQ(weighted.pvalues, plain.pvalues);
}

TEST(RunSamgsr, PlantedCoreRecovery) {
  // 3 differential genes and 7 null genes in one set, n = 30.
  int superset = 0, at_most_one_null = 0;
  const int seeds = 40;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(1000 + seed);
    auto d = random_dataset(rng, 10, 30, 15, 3, 2.0);
    const GeneSet set{"S", "", d.gene_ids()};
    const auto plan = build_plan(d.labels(), 500, seed);
    const auto trace = reduce_set(d, set, plan, {}, 0.5);
    const std::set<std::string> core(trace.core.begin(), trace.core.end());
    const bool has_all = core.count("g001") && core.count("g002") && core.count("g003");
    superset += has_all;
    at_most_one_null += has_all && core.size() <= 4;
  }
  EXPECT_GE(superset, seeds * 9 / 10);
  // Null residuals have roughly uniform p-values, so at c* = 0.5 the rule
  // fires within one extra gene about three times in four.
  EXPECT_GE(at_most_one_null, seeds * 6 / 10);
}

}  // namespace
}  // namespace samgsr
