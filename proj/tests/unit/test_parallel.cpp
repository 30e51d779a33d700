#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "fixtures.hpp"
#include "samgsr/parallel.hpp"
#include "samgsr/pipeline.hpp"

namespace samgsr {
namespace {

struct Threads {
  explicit Threads(std::size_t n) { set_default_threads(n); }
  ~Threads() { set_default_threads(0); }
};

TEST(ParallelFor, VisitsEveryIndexOnce) {
  Threads t(4);
  EXPECT_EQ(default_threads(), 4u);
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
  Threads t(3);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i % 17 == 5) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "5");
  }
}

TEST(ParallelFor, NestedLoopsComplete) {
  Threads t(3);
  std::atomic<int> total{0};
  parallel_for(6, [&](std::size_t) { parallel_for(5, [&](std::size_t) { total.fetch_add(1); }); });
  EXPECT_EQ(total.load(), 30);
}

TEST(ParallelFor, PipelineIsThreadCountInvariant) {
  Rng rng(8);
  const auto data = testing::random_dataset(rng, 60, 20, 10, 6, 1.2);
  const auto sets = testing::random_collection(rng, data.gene_ids(), 5, 4, 15);
  TuningConfig tuning;
  tuning.grid = {0.1, 0.3, 0.5};
  tuning.folds = 4;
  tuning.samgsr.permutations = 80;
  tuning.samgsr.alpha = 0.5;

  PipelineRun serial, wide;
  {
    Threads t(1);
    serial = run_pipeline(data, sets, nullptr, tuning);
  }
  {
    Threads t(5);
    wide = run_pipeline(data, sets, nullptr, tuning);
  }
  EXPECT_TRUE(serial == wide);
}

}  // namespace
}  // namespace samgsr
