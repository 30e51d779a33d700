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

namespace samgsr {

/// How the offset s0 is chosen from the per-gene pooled SDs.
struct S0Method {
  enum class Kind { median, fixed, percentile };

  Kind kind = Kind::median;
  double value = 0.0;  // the constant for `fixed`, q in [0, 100] for `percentile`

  static S0Method median() { return {}; }
  static S0Method fixed(double s0) { return {Kind::fixed, s0}; }
  static S0Method percentile(double q) { return {Kind::percentile, q}; }

  bool operator==(const S0Method&) const = default;
};

/// "median", "fixed:<value>" or "percentile:<q>".
std::string to_string(const S0Method& method);
S0Method parse_s0_method(std::string_view text);

/// Linear-interpolation percentile (q in [0, 100]) of unsorted values.
double percentile(std::span<const double> values, double q);

/// Two-group pooled SD: sqrt((SS_pos + SS_neg) / (n_pos + n_neg - 2)).
double pooled_sd(std::span<const double> values, std::span<const std::uint8_t> positive);
double pooled_sd(const ExpressionDataset& dataset, const BinaryDesign& design, std::size_t gene);

/// s0 from the pooled SDs of all genes. Zero SDs are ignored by the median
/// and percentile rules; if none is positive those rules throw.
double compute_s0(std::span<const double> all_s, const S0Method& method);

struct SamStatistics {
  std::vector<std::string> gene_ids;
  std::vector<double> d;
  std::vector<double> s;
  double s0 = 0.0;
  bool weighted = false;
  std::optional<WeightVector> weights_used;

  std::optional<std::size_t> index_of(std::string_view gene_id) const;
};

/// d_i = (mean_pos(i) - mean_neg(i)) / (s(i) + s0) for every gene.
SamStatistics sam_statistic(const ExpressionDataset& dataset, const BinaryDesign& design, const S0Method& method);

/// d_i^w = w_i * d_i with already-normalized weights. Throws if a gene has no weight.
SamStatistics weighted_sam_statistic(const SamStatistics& stats, const WeightVector& weights);

struct SetScore {
  std::string set_name;
  double score = 0.0;
  std::size_t size = 0;
};

/// Sum of squared statistics over the set's members. Terms are accumulated
/// from the last member to the first; the permutation engine uses the same
/// order so residual suffixes share partial sums bit-for-bit.
SetScore samgs_score(const SamStatistics& stats, const GeneSet& set);

/// Evaluates SAM statistics for arbitrary group assignments of one dataset.
/// Observed and permuted statistics go through this one code path so that
/// equal assignments give bitwise-equal results.
class SamKernel {
 public:
  explicit SamKernel(const ExpressionDataset& dataset);

  std::size_t gene_count() const noexcept { return genes_; }
  std::size_t sample_count() const noexcept { return samples_; }

  struct Workspace {
    std::vector<double> mean_pos;
    std::vector<double> mean_neg;
    std::vector<double> s;
    std::vector<double> scratch;
  };

  /// Computes the pooled SD of every gene (into ws.s) and d for the genes in
  /// `genes` (into d_out, same order). Returns s0.
  double evaluate(std::span<const std::uint8_t> positive, const S0Method& method,
                  std::span<const std::size_t> genes, std::span<double> d_out, Workspace& ws) const;

 private:
  const double* values_;
  std::size_t genes_;
  std::size_t samples_;
};

}  // namespace samgsr
