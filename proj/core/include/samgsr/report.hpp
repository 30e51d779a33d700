#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "samgsr/classifier.hpp"
#include "samgsr/connectivity.hpp"
#include "samgsr/metrics.hpp"
#include "samgsr/pipeline.hpp"
#include "samgsr/reduction.hpp"
#include "samgsr/simgen.hpp"

namespace samgsr {

std::string software_version();

/// Parameters of one CLI run. The output directory and worker count are
/// deliberately absent: they never change results.
struct RunConfig {
  std::string command;
  std::string expression_path;
  std::string labels_path;
  std::string gmt_path;
  std::string ppi_path;
  bool ppi_header = false;
  std::string model_path;
  std::string stage_model_path;
  std::vector<std::string> report_paths;

  bool weighted = false;
  double alpha = 0.05;
  double c_star = 0.5;
  std::vector<double> grid;
  std::size_t permutations = 1000;
  std::size_t folds = 5;
  std::uint64_t seed = 1;
  std::string s0 = "median";
  std::string normalization = "mean-one";
  std::string positive_class;
  double lambda = 1e-2;

  std::size_t replicates = 30;
  std::size_t n_train = 60;
  std::size_t n_test = 60;
  std::size_t universe = 1000;
  std::string label_model = "bernoulli";

  /// Range checks, the weighted-needs-graph rule, and existence of every
  /// referenced input file.
  void validate() const;
  std::string fingerprint() const;
  bool operator==(const RunConfig&) const = default;
};

struct WeightsReport {
  std::string normalization;
  GraphBuildReport graph;
  std::size_t missing_genes = 0;
  WeightVector raw;
  WeightVector normalized;
  /// Set-membership count vs connectivity; absent without a gene set file.
  std::optional<double> setcount_spearman;

  bool operator==(const WeightsReport&) const = default;
};

struct NamedEval {
  std::string name;
  EvalReport report;

  bool operator==(const NamedEval&) const = default;
};

struct RunReport {
  std::string command;
  std::string software_version;
  /// The only field that differs between otherwise identical runs.
  std::string created_at;
  std::string config_fingerprint;
  RunConfig config;
  std::optional<SetPValueTable> pvalues;
  std::optional<SamgsrResult> selection;
  std::optional<TuningResult> tuning;
  std::optional<LinearClassifier> model;
  std::vector<NamedEval> evaluations;
  std::optional<StabilityReport> stability;
  std::optional<ReplicateSummary> simulation;
  std::optional<WeightsReport> weights;
  std::vector<std::string> warnings;

  bool operator==(const RunReport&) const = default;
};

/// ISO-8601 UTC timestamp of the current time.
std::string utc_timestamp();

std::string to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

void save_report(const std::string& path, const RunReport& report);
RunReport load_report(const std::string& path);

/// Aligned plain-text tables for every populated section.
std::string render_text(const RunReport& report);

/// Per-method selection frequencies and test metrics of a replicate study.
std::string render_simulation_table(const ReplicateSummary& summary);

}  // namespace samgsr
