#include "samgsr/pipeline.hpp"

#include <optional>

#include "samgsr/error.hpp"
#include "samgsr/parallel.hpp"
#include "samgsr/random.hpp"

namespace samgsr {

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(i * 0.05);
  return grid;
}

void TuningConfig::validate() const {
  if (grid.empty()) throw ConfigError("threshold grid is empty");
  for (const double c : grid) {
    if (!(c > 0.0 && c <= 1.0)) throw ConfigError("threshold grid values must lie in (0, 1]");
  }
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  samgsr.validate();
}

LinearClassifier fit_signature_model(const ExpressionDataset& dataset, const Signature& signature,
                                     std::string_view positive_class, const ClassifierOptions& options) {
  if (signature.empty()) return constant_classifier(dataset, positive_class);
  const auto genes = signature.gene_names();
  return fit_classifier(dataset, genes, positive_class, options);
}

TuningResult tune_threshold(const ExpressionDataset& dataset, const GeneSetCollection& collection,
                            const ConnectivityGraph* graph, const TuningConfig& config) {
  config.validate();
  if (config.samgsr.weighted && graph == nullptr) {
    throw ConfigError("weighted SAMGSR needs a connectivity graph (PPI edge list)");
  }
  const std::string positive = binary_design(dataset, config.samgsr.positive_class).positive_class;
  const FoldAssignment folds = make_folds(dataset.labels(), config.folds, derive_seed(config.seed, "cv-folds"));
  const std::size_t K = folds.fold_count;
  const std::size_t G = config.grid.size();

  std::vector<ExpressionDataset> train(K), test(K);
  std::vector<std::vector<std::size_t>> test_rows(K);
  for (std::size_t f = 0; f < K; ++f) {
    const auto tr = folds.train_indices(f);
    test_rows[f] = folds.test_indices(f);
    train[f] = dataset.select_samples(tr);
    test[f] = dataset.select_samples(test_rows[f]);
  }

  std::vector<std::optional<SamgsrProfile>> profiles(K);
  parallel_for(K, [&](std::size_t f) {
    SamgsrConfig fold_config = config.samgsr;
    fold_config.positive_class = positive;
    fold_config.seed = derive_seed(config.seed, "cv-fold-permutations", f);
    profiles[f].emplace(profile_samgsr(train[f], collection, graph, fold_config));
  });

  // One cell per (fold, grid point).
  std::vector<PosteriorMatrix> cells(K * G);
  std::vector<std::size_t> sizes(K * G, 0);
  parallel_for(K * G, [&](std::size_t cell) {
    const std::size_t f = cell / G, g = cell % G;
    const SamgsrResult selection = profiles[f]->at(config.grid[g]);
    sizes[cell] = selection.signature.size();
    const LinearClassifier model = fit_signature_model(train[f], selection.signature, positive, config.classifier);
    cells[cell] = predict(model, test[f]);
  });

  TuningResult result;
  result.grid = config.grid;
  result.folds = K;
  result.fold_fingerprint = folds.fingerprint();
  result.stratification_degraded = folds.stratification_degraded;
  result.misclassified.assign(G, 0);
  result.mean_signature_size.assign(G, 0.0);
  result.empty_signature_folds.assign(G, 0);
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t f = 0; f < K; ++f) {
      const PosteriorMatrix& post = cells[f * G + g];
      for (std::size_t i = 0; i < post.rows(); ++i) {
        const bool predicted_positive = post.at(i, 1) > post.at(i, 0);
        const bool truly_positive = test[f].labels()[i] == positive;
        if (predicted_positive != truly_positive) ++result.misclassified[g];
      }
      result.mean_signature_size[g] += static_cast<double>(sizes[f * G + g]);
      if (sizes[f * G + g] == 0) ++result.empty_signature_folds[g];
    }
    result.mean_signature_size[g] /= static_cast<double>(K);
    result.cv_error.push_back(static_cast<double>(result.misclassified[g]) /
                              static_cast<double>(dataset.sample_count()));
  }

  std::size_t best = 0;
  for (std::size_t g = 1; g < G; ++g) {
    const bool fewer = result.misclassified[g] < result.misclassified[best];
    const bool tie_smaller = result.misclassified[g] == result.misclassified[best] && config.grid[g] < config.grid[best];
    if (fewer || tie_smaller) best = g;
  }
  result.chosen_index = best;
  result.chosen_c_star = config.grid[best];

  PosteriorMatrix& pooled = result.cv_posterior;
  pooled.classes = cells[best].classes;
  pooled.sample_ids = dataset.sample_ids();
  pooled.values.assign(dataset.sample_count() * 2, 0.0);
  for (std::size_t f = 0; f < K; ++f) {
    const PosteriorMatrix& post = cells[f * G + best];
    for (std::size_t i = 0; i < test_rows[f].size(); ++i) {
      pooled.values[test_rows[f][i] * 2] = post.at(i, 0);
      pooled.values[test_rows[f][i] * 2 + 1] = post.at(i, 1);
    }
  }
  return result;
}

PipelineRun run_pipeline(const ExpressionDataset& dataset, const GeneSetCollection& collection,
                         const ConnectivityGraph* graph, const TuningConfig& config) {
  PipelineRun run;
  run.tuning = tune_threshold(dataset, collection, graph, config);
  SamgsrConfig final_config = config.samgsr;
  final_config.c_star = run.tuning.chosen_c_star;
  run.selection = run_samgsr(dataset, collection, graph, final_config);
  run.model = fit_signature_model(dataset, run.selection.signature, run.selection.positive_class, config.classifier);
  return run;
}

}  // namespace samgsr
