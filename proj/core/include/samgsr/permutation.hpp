#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "samgsr/connectivity.hpp"
#include "samgsr/data_model.hpp"
#include "samgsr/sam.hpp"

namespace samgsr {

/// Materialized label permutations shared by every set and reduction step of
/// a run. permutations[b][i] is the original sample whose label sample i
/// receives under permutation b.
struct PermutationPlan {
  std::size_t sample_count = 0;
  std::size_t requested = 0;
  std::uint64_t seed = 0;
  /// True when `requested` reached the number of distinct label assignments
  /// and the plan enumerates each of them exactly once instead of sampling.
  bool exhaustive = false;
  std::vector<std::vector<std::uint32_t>> permutations;

  std::size_t size() const noexcept { return permutations.size(); }
  bool operator==(const PermutationPlan&) const = default;
};

/// Number of distinct arrangements of a label vector (multinomial
/// coefficient), saturating at `cap`.
std::uint64_t distinct_assignments(std::span<const std::string> labels, std::uint64_t cap);

/// Uniform shuffles, deterministic in (labels, permutations, seed); switches
/// to exhaustive enumeration when `permutations` >= the number of distinct
/// label assignments.
PermutationPlan build_plan(std::span<const std::string> labels, std::size_t permutations, std::uint64_t seed);

/// Statistic configuration shared by observed and permuted evaluation.
struct StatConfig {
  std::string positive_class;  // empty: last label level in sorted order
  S0Method s0;
  bool weighted = false;
  /// Normalized weights; required when `weighted`. Label-free, so they are
  /// fixed across permutations while s0 is recomputed for each one.
  std::optional<WeightVector> weights;
};

struct SetPValue {
  std::string set_name;
  std::size_t size = 0;
  double observed = 0.0;
  double p_value = 1.0;
  std::size_t permutations = 0;

  bool operator==(const SetPValue&) const = default;
};

struct SetPValueTable {
  std::vector<SetPValue> rows;  // collection order

  const SetPValue* find(std::string_view set_name) const;
  bool operator==(const SetPValueTable&) const = default;
};

/// Observed and per-permutation (optionally weighted) SAM statistics of a
/// gene subset, computed once per plan. Scores of any subset of the stored
/// genes, and their add-one permutation p-values, are then cheap lookups.
/// The dataset must outlive construction only.
class PermutationNull {
 public:
  PermutationNull(const ExpressionDataset& dataset, const PermutationPlan& plan, const StatConfig& config,
                  std::span<const std::string> genes);

  std::size_t permutation_count() const noexcept { return permutations_; }
  const std::vector<std::string>& genes() const noexcept { return genes_; }
  std::optional<std::size_t> local_index(std::string_view gene_id) const;

  /// Observed statistic (d or d^w) of a stored gene.
  double observed(std::size_t local) const { return observed_[local]; }
  double permuted(std::size_t local, std::size_t b) const { return null_[local * permutations_ + b]; }
  double observed_s0() const noexcept { return observed_s0_; }
  const SamStatistics& observed_statistics() const noexcept { return observed_stats_; }

  /// SAMGS score and p = (1 + #{b : score_b >= observed}) / (1 + B).
  /// Terms are summed from the last listed gene to the first.
  SetPValue score(std::span<const std::size_t> locals) const;

  /// c_k for the residual sets R_k = ordered[k..m-1], k = 1..m-1.
  std::vector<double> residual_pvalues(std::span<const std::size_t> ordered) const;

 private:
  std::vector<std::string> genes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t permutations_ = 0;
  std::vector<double> observed_;
  std::vector<double> null_;  // [local * B + b]
  double observed_s0_ = 0.0;
  SamStatistics observed_stats_;
};

/// Weights aligned to the dataset genes; empty when unweighted.
std::vector<double> aligned_weights(const ExpressionDataset& dataset, const StatConfig& config);

SetPValueTable set_pvalues(const ExpressionDataset& dataset, const GeneSetCollection& collection,
                           const PermutationPlan& plan, const StatConfig& config);

double subset_pvalue(const ExpressionDataset& dataset, std::span<const std::string> genes,
                     const PermutationPlan& plan, const StatConfig& config);

}  // namespace samgsr
