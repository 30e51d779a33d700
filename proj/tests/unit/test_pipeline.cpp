#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "samgsr/error.hpp"
#include "samgsr/metrics.hpp"
#include "samgsr/parallel.hpp"
#include "samgsr/pipeline.hpp"
#include "samgsr/random.hpp"

namespace samgsr {
namespace {

using testing::random_collection;
using testing::random_dataset;

PosteriorMatrix binary(std::vector<std::string> classes, std::vector<double> p) {
  PosteriorMatrix m;
  m.classes = std::move(classes);
  for (std::size_t i = 0; i < p.size(); ++i) {
    m.sample_ids.push_back("s" + std::to_string(i));
    m.values.push_back(1 - p[i]);
    m.values.push_back(p[i]);
  }
  return m;
}

TEST(CompositeFourClass, ProductsAndNames) {
  // column 0 of each input: AC / stage I
  PosteriorMatrix subtype = binary({"AC", "SCC"}, {0.3, 0.0, 0.5});
  PosteriorMatrix stage = binary({"I", "II"}, {0.6, 0.0, 0.5});
  const auto c = composite_four_class(subtype, stage);
  EXPECT_EQ(c.classes, (std::vector<std::string>{"AC-I", "AC-II", "SCC-I", "SCC-II"}));
  EXPECT_NEAR(c.at(0, 0), 0.28, 1e-15);
  EXPECT_NEAR(c.at(0, 1), 0.42, 1e-15);
  EXPECT_NEAR(c.at(0, 2), 0.12, 1e-15);
  EXPECT_NEAR(c.at(0, 3), 0.18, 1e-15);
  EXPECT_EQ(c.at(1, 0), 1.0);
  EXPECT_EQ(c.at(1, 3), 0.0);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(c.at(2, k), 0.25);
  c.validate();
}

TEST(CompositeFourClass, RowsSumToExactlyOne) {
  Rng rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> a(500), b(500);
  for (auto& v : a) v = u(rng);
  for (auto& v : b) v = u(rng);
  const auto c = composite_four_class(binary({"x", "y"}, a), binary({"p", "q"}, b));
  for (std::size_t i = 0; i < c.rows(); ++i) {
    EXPECT_EQ(((c.at(i, 0) + c.at(i, 1)) + c.at(i, 2)) + c.at(i, 3), 1.0);
  }
}

TEST(CompositeFourClass, SampleMismatch) {
  auto a = binary({"x", "y"}, {0.1, 0.2});
  auto b = binary({"p", "q"}, {0.1, 0.2});
  b.sample_ids[1] = "other";
  EXPECT_THROW(composite_four_class(a, b), InvalidInput);
}

TEST(PosteriorMatrix, Validation) {
  auto m = binary({"x", "y"}, {0.2});
  m.validate();
  m.values[0] = 0.9;
  EXPECT_THROW(m.validate(), InvalidInput);
  m.values = {1.5, -0.5};
  EXPECT_THROW(m.validate(), InvalidInput);
}

struct Planted {
  ExpressionDataset data;
  GeneSetCollection sets;
};

Planted planted(std::uint64_t seed) {
  Rng rng(seed);
  auto d = random_dataset(rng, 60, 60, 30, 2, 1.0);
  std::vector<GeneSet> sets = {{"focus", "", {"g001", "g002", "g010", "g011", "g012", "g013", "g014", "g015"}}};
  auto rest = random_collection(rng, d.gene_ids(), 4, 8, 20).sets();
  for (auto& s : rest) sets.push_back(s);
  return {d, GeneSetCollection(sets)};
}

TuningConfig quick(std::vector<double> grid) {
  TuningConfig cfg;
  cfg.grid = std::move(grid);
  cfg.samgsr.permutations = 200;
  cfg.samgsr.alpha = 0.2;
  return cfg;
}

TEST(TuneThreshold, SingleValueGridAndTieBreak) {
  const auto p = planted(1);
  const auto one = tune_threshold(p.data, p.sets, nullptr, quick({0.4}));
  EXPECT_EQ(one.chosen_c_star, 0.4);
  EXPECT_EQ(one.chosen_index, 0u);
  const auto two = tune_threshold(p.data, p.sets, nullptr, quick({0.5, 0.5000001}));
  EXPECT_EQ(two.misclassified[0], two.misclassified[1]);
  EXPECT_EQ(two.chosen_index, 0u);
}

TEST(TuneThreshold, CurveShapeAndChoiceRule) {
  const auto p = planted(2);
  const auto r = tune_threshold(p.data, p.sets, nullptr, quick(default_threshold_grid()));
  ASSERT_EQ(r.misclassified.size(), 19u);
  EXPECT_EQ(r.folds, 5u);
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    EXPECT_GE(r.misclassified[i], r.misclassified[r.chosen_index]);
    if (i < r.chosen_index) {
      EXPECT_GT(r.misclassified[i], r.misclassified[r.chosen_index]);
    }
    EXPECT_DOUBLE_EQ(r.cv_error[i], static_cast<double>(r.misclassified[i]) / 60.0);
  }
  EXPECT_EQ(r.cv_posterior.rows(), 60u);
  EXPECT_EQ(r.cv_posterior.sample_ids, p.data.sample_ids());
  const auto post_err = error_rate(r.cv_posterior, truth_indices(r.cv_posterior, p.data.labels()));
  EXPECT_DOUBLE_EQ(post_err, r.cv_error[r.chosen_index]);
}

TEST(TuneThreshold, DeterministicAcrossThreadCounts) {
  const auto p = planted(3);
  set_default_threads(1);
  const auto a = tune_threshold(p.data, p.sets, nullptr, quick({0.1, 0.5, 0.9}));
  set_default_threads(3);
  const auto b = tune_threshold(p.data, p.sets, nullptr, quick({0.1, 0.5, 0.9}));
  set_default_threads(0);
  EXPECT_EQ(a, b);
}

TEST(TuneThreshold, CloseToOracleModelOnPlantedGenes) {
  const auto p = planted(4);
  const auto cfg = quick({0.1, 0.3, 0.5, 0.9});
  const auto r = tune_threshold(p.data, p.sets, nullptr, cfg);
  const auto folds = make_folds(p.data.labels(), cfg.folds, derive_seed(cfg.seed, "cv-folds"));
  EXPECT_EQ(folds.fingerprint(), r.fold_fingerprint);
  std::size_t oracle_errors = 0;
  const std::vector<std::string> truth_genes = {"g001", "g002"};
  for (std::size_t f = 0; f < folds.fold_count; ++f) {
    const auto train = p.data.select_samples(folds.train_indices(f));
    const auto test = p.data.select_samples(folds.test_indices(f));
    const auto post = predict(fit_classifier(train, truth_genes, "B"), test);
    oracle_errors += static_cast<std::size_t>(std::lround(error_rate(post, truth_indices(post, test.labels())) *
                                                          static_cast<double>(test.sample_count())));
  }
  const double oracle = static_cast<double>(oracle_errors) / 60.0;
  EXPECT_LE(r.cv_error[r.chosen_index], oracle + 0.05);
}

TEST(TuneThreshold, EmptySignatureFoldsScoreAsMajority) {
  Rng rng(9);
  auto d = random_dataset(rng, 30, 20, 8);
  const auto sets = random_collection(rng, d.gene_ids(), 3, 4, 10);
  auto cfg = quick({0.5});
  cfg.samgsr.alpha = 1e-6;
  const auto r = tune_threshold(d, sets, nullptr, cfg);
  EXPECT_EQ(r.empty_signature_folds[0], 5u);
  EXPECT_EQ(r.mean_signature_size[0], 0.0);
  EXPECT_LE(r.cv_error[0], 0.5);
}

TEST(TuneThreshold, ConfigErrors) {
  const auto p = planted(5);
  EXPECT_THROW(tune_threshold(p.data, p.sets, nullptr, quick({})), ConfigError);
  EXPECT_THROW(tune_threshold(p.data, p.sets, nullptr, quick({1.5})), ConfigError);
  auto w = quick({0.5});
  w.samgsr.weighted = true;
  EXPECT_THROW(tune_threshold(p.data, p.sets, nullptr, w), ConfigError);
  auto k = quick({0.5});
  k.folds = 1;
  EXPECT_THROW(tune_threshold(p.data, p.sets, nullptr, k), ConfigError);
}

TEST(RunPipeline, SelectsAtChosenThreshold) {
  const auto p = planted(6);
  const auto cfg = quick({0.2, 0.6});
  const auto run = run_pipeline(p.data, p.sets, nullptr, cfg);
  SamgsrConfig s = cfg.samgsr;
  s.c_star = run.tuning.chosen_c_star;
  EXPECT_EQ(run.selection, run_samgsr(p.data, p.sets, nullptr, s));
  EXPECT_EQ(run.model.genes.size(), run.selection.signature.size());
}

}  // namespace
}  // namespace samgsr
