#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "samgsr/classifier.hpp"
#include "samgsr/connectivity.hpp"
#include "samgsr/data_model.hpp"
#include "samgsr/posterior.hpp"
#include "samgsr/reduction.hpp"

namespace samgsr {

/// 0.05, 0.10, ..., 0.95.
std::vector<double> default_threshold_grid();

struct TuningConfig {
  std::vector<double> grid = default_threshold_grid();
  std::size_t folds = 5;
  /// Root of the fold assignment and of every per-fold permutation plan.
  std::uint64_t seed = 1;
  /// Everything except c_star, which is what gets tuned.
  SamgsrConfig samgsr;
  ClassifierOptions classifier;

  void validate() const;
};

struct TuningResult {
  std::vector<double> grid;
  std::vector<std::size_t> misclassified;  // pooled over folds, per grid point
  std::vector<double> cv_error;
  std::vector<double> mean_signature_size;
  /// Folds whose signature was empty and fell back to the majority class.
  std::vector<std::size_t> empty_signature_folds;
  std::size_t chosen_index = 0;
  double chosen_c_star = 0.0;
  std::size_t folds = 0;
  std::string fold_fingerprint;
  bool stratification_degraded = false;
  /// Held-out posteriors at the chosen threshold, in dataset sample order.
  PosteriorMatrix cv_posterior;

  bool operator==(const TuningResult&) const = default;
};

/// K-fold cross-validation of c_star. Each fold runs SAMGSR once and cuts the
/// threshold-free profile at every grid point. The chosen point has the
/// lowest pooled error; ties go to the smallest c_star.
TuningResult tune_threshold(const ExpressionDataset& dataset, const GeneSetCollection& collection,
                            const ConnectivityGraph* graph, const TuningConfig& config);

/// Classifier on the signature, or the constant majority model when empty.
LinearClassifier fit_signature_model(const ExpressionDataset& dataset, const Signature& signature,
                                     std::string_view positive_class, const ClassifierOptions& options);

struct PipelineRun {
  TuningResult tuning;
  SamgsrResult selection;
  LinearClassifier model;

  bool operator==(const PipelineRun&) const = default;
};

/// Tune c_star, then select and fit on the full dataset at the chosen value.
PipelineRun run_pipeline(const ExpressionDataset& dataset, const GeneSetCollection& collection,
                         const ConnectivityGraph* graph, const TuningConfig& config);

}  // namespace samgsr
