#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "samgsr/connectivity.hpp"
#include "samgsr/data_model.hpp"
#include "samgsr/permutation.hpp"
#include "samgsr/sam.hpp"

namespace samgsr {

/// One set's reduction: genes ordered by decreasing |statistic|, the residual
/// p-values c_1.. observed until the stopping rule fired, and the core prefix.
struct ReductionTrace {
  std::string set_name;
  std::vector<std::string> ordered_genes;
  std::vector<double> ordered_statistic;
  std::vector<double> c_values;
  std::size_t stop_k = 0;
  std::vector<std::string> core;
  /// The rule never fired; the whole set is kept.
  bool exhausted = false;
  /// Adjacent genes with equal |statistic|, ordered by name.
  std::size_t tied_pairs = 0;

  bool operator==(const ReductionTrace&) const = default;
};

/// Threshold-free reduction of one set: every residual p-value c_1..c_{m-1}.
/// A trace for any threshold is a cut of this profile.
struct SetReduction {
  std::string set_name;
  std::vector<std::string> ordered_genes;
  std::vector<double> ordered_statistic;
  std::vector<double> residual_p;  // residual_p[k-1] = c_k
  std::size_t tied_pairs = 0;

  /// Stops at the first k with c_k > c_star (strict).
  ReductionTrace at(double c_star) const;
};

SetReduction reduction_profile(const PermutationNull& null, const GeneSet& set);

/// Sets with p <= alpha, ordered by ascending p then name.
std::vector<SetPValue> screen_sets(const SetPValueTable& table, double alpha);

ReductionTrace reduce_set(const ExpressionDataset& dataset, const GeneSet& set, const PermutationPlan& plan,
                          const StatConfig& config, double c_star);

struct SignatureGene {
  std::string gene;
  double statistic = 0.0;
  std::vector<std::string> source_sets;
  std::vector<std::size_t> ranks;  // 1-based position in each source set's ordering

  bool operator==(const SignatureGene&) const = default;
};

/// Union of all cores, ordered by decreasing |statistic| then name.
struct Signature {
  std::vector<SignatureGene> genes;
  std::string config_fingerprint;

  bool empty() const noexcept { return genes.empty(); }
  std::size_t size() const noexcept { return genes.size(); }
  std::vector<std::string> gene_names() const;
  bool operator==(const Signature&) const = default;
};

struct SamgsrConfig {
  bool weighted = false;
  double alpha = 0.05;
  double c_star = 0.5;
  std::size_t permutations = 1000;
  std::uint64_t seed = 1;
  S0Method s0;
  WeightNormalization normalization = WeightNormalization::mean_one;
  std::string positive_class;

  void validate() const;
  /// Stable hash of every parameter.
  std::string fingerprint() const;
};

struct SamgsrResult {
  Signature signature;
  std::vector<ReductionTrace> traces;  // screening order
  SetPValueTable pvalues;
  std::vector<std::string> screened_sets;
  std::string positive_class;
  double s0 = 0.0;
  bool exhaustive_plan = false;
  std::size_t permutations_used = 0;
  std::vector<std::string> warnings;

  bool operator==(const SamgsrResult&) const = default;
};

/// Everything in a SAMGSR run that does not depend on the reduction
/// threshold. Cutting it at c_star gives exactly what run_samgsr returns.
class SamgsrProfile {
 public:
  SamgsrProfile(SamgsrConfig config, SamgsrResult base, std::vector<SetReduction> reductions);

  SamgsrResult at(double c_star) const;
  const SamgsrConfig& config() const noexcept { return config_; }
  const SetPValueTable& pvalues() const noexcept { return base_.pvalues; }
  const std::vector<SetReduction>& reductions() const noexcept { return reductions_; }

 private:
  SamgsrConfig config_;
  SamgsrResult base_;  // everything except signature and traces
  std::vector<SetReduction> reductions_;
};

/// Connectivity weights for the dataset's genes, normalized by `scheme`.
/// Genes absent from the graph are isolated (w = 1).
WeightVector dataset_weights(const ExpressionDataset& dataset, const ConnectivityGraph& graph,
                             WeightNormalization scheme, std::size_t* missing = nullptr);

/// `graph` is required when config.weighted is set.
SamgsrProfile profile_samgsr(const ExpressionDataset& dataset, const GeneSetCollection& collection,
                             const ConnectivityGraph* graph, const SamgsrConfig& config);

SamgsrResult run_samgsr(const ExpressionDataset& dataset, const GeneSetCollection& collection,
                        const ConnectivityGraph* graph, const SamgsrConfig& config);

}  // namespace samgsr
