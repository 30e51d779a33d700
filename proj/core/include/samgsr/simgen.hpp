#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "samgsr/connectivity.hpp"
#include "samgsr/data_model.hpp"
#include "samgsr/metrics.hpp"
#include "samgsr/pipeline.hpp"

namespace samgsr {

struct PlantedGene {
  std::string gene;
  double coefficient = 0.0;
  /// Where the gene sits in the synthetic degree distribution, in [0, 1].
  double degree_quantile = 0.5;
  /// Indices of the small sets that contain the gene.
  std::vector<std::size_t> sets = {0};

  bool operator==(const PlantedGene&) const = default;
};

/// Default planted effects: a weak hub and a strong gene of median degree.
std::vector<PlantedGene> default_planted_genes();

/// How a class is drawn from the planted logit: a Bernoulli draw with
/// probability sigmoid(logit), or deterministically its sign.
enum class LabelModel { bernoulli, threshold };

std::string_view to_string(LabelModel model);
LabelModel parse_label_model(std::string_view text);

struct SimConfig {
  std::size_t n_train = 60;
  std::size_t n_test = 60;
  std::size_t universe = 1000;
  std::vector<PlantedGene> planted = default_planted_genes();
  std::uint64_t seed = 1;
  /// Edges added per new node in the preferential-attachment graph.
  std::size_t attachment = 2;
  std::size_t set_count = 5;
  /// Sizes of the leading sets that host planted genes; the remaining
  /// background sets split the rest of the universe.
  std::vector<std::size_t> small_sets = {6, 3};
  /// Extra members each background set borrows from the rest of the universe.
  double overlap = 0.1;
  LabelModel label_model = LabelModel::bernoulli;
  std::string negative_class = "control";
  std::string positive_class = "case";

  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

/// Gene universe, interaction graph and gene sets shared by every replicate.
struct SyntheticDesign {
  std::vector<std::string> gene_ids;
  std::vector<GenePair> edges;
  ConnectivityGraph graph;
  GeneSetCollection collection;
};

SyntheticDesign synthetic_design(const SimConfig& config);

struct SimulatedData {
  ExpressionDataset train;
  ExpressionDataset test;
};

/// Linear logit over the planted genes.
double planted_logit(std::span<const PlantedGene> planted, std::span<const double> values);

/// Standard normal features; labels from the planted logit per `label_model`.
SimulatedData simulate_dataset(const SimConfig& config, std::span<const std::string> gene_ids, std::uint64_t seed);
SimulatedData simulate_dataset(const SimConfig& config);

struct ResimConfig {
  std::vector<PlantedGene> planted = default_planted_genes();
  std::uint64_t seed = 1;
  double test_fraction = 0.5;
  std::string negative_class = "control";
  std::string positive_class = "case";
};

/// Keeps the standardized real expression values and redraws every label
/// from the planted logit, then splits the samples into train and test.
SimulatedData resimulate_from_real(const ExpressionDataset& expression, const ResimConfig& config);

/// Pipeline settings of the replicate study: a permissive screening level
/// (alpha 0.5) so that the small planted sets always reach the reduction step.
TuningConfig default_study_tuning();

struct StudyConfig {
  SimConfig sim;
  std::size_t replicates = 30;
  /// Seeds inside `tuning` are replaced per replicate from sim.seed.
  TuningConfig tuning = default_study_tuning();
};

/// Planted-gene selection and test metrics of one method over replicates.
struct MethodSummary {
  std::string method;
  std::vector<std::size_t> signature_sizes;
  std::vector<double> chosen_c_star;
  std::vector<std::size_t> planted_hits;  // replicates selecting each planted gene
  std::vector<EvalReport> test_reports;
  double rand_gene = 0.0;

  double mean_signature_size() const;
  double selection_percent(std::size_t planted) const;
  EvalReport mean_test_report() const;

  bool operator==(const MethodSummary&) const = default;
};

struct ReplicateSummary {
  std::size_t replicates = 0;
  std::vector<PlantedGene> planted;
  std::vector<std::size_t> planted_degrees;
  std::vector<double> planted_weights;  // mean-one normalized
  std::vector<MethodSummary> methods;   // unweighted, weighted

  bool operator==(const ReplicateSummary&) const = default;
};

ReplicateSummary replicate_study(const StudyConfig& config);

}  // namespace samgsr
