#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace samgsr {

/// Genes x samples expression matrix with per-sample class labels.
///
/// Construction checks shape and identifier uniqueness. Statistical
/// requirements (two or more classes, two or more samples per class) are
/// checked by the operations that need them, so held-out folds and test sets
/// with a single class remain representable.
class ExpressionDataset {
 public:
  ExpressionDataset() = default;

  /// `values` is row-major: values[g * sample_count + s].
  ExpressionDataset(std::vector<std::string> gene_ids, std::vector<std::string> sample_ids,
                    std::vector<double> values, std::vector<std::string> labels);

  std::size_t gene_count() const noexcept { return gene_ids_.size(); }
  std::size_t sample_count() const noexcept { return sample_ids_.size(); }

  const std::vector<std::string>& gene_ids() const noexcept { return gene_ids_; }
  const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::span<const double> row(std::size_t gene) const {
    return {values_.data() + gene * sample_count(), sample_count()};
  }
  double at(std::size_t gene, std::size_t sample) const { return values_[gene * sample_count() + sample]; }

  std::optional<std::size_t> gene_index(std::string_view gene_id) const;
  bool has_gene(std::string_view gene_id) const { return gene_index(gene_id).has_value(); }

  /// Sorted distinct labels.
  std::vector<std::string> class_levels() const;

  ExpressionDataset select_samples(std::span<const std::size_t> samples) const;
  ExpressionDataset select_genes(std::span<const std::size_t> genes) const;
  ExpressionDataset with_labels(std::vector<std::string> labels) const;

  bool operator==(const ExpressionDataset& other) const {
    return gene_ids_ == other.gene_ids_ && sample_ids_ == other.sample_ids_ && values_ == other.values_ &&
           labels_ == other.labels_;
  }

 private:
  std::vector<std::string> gene_ids_;
  std::vector<std::string> sample_ids_;
  std::vector<double> values_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Two-group view of a dataset: which samples form the positive ("d") group.
struct BinaryDesign {
  std::string positive_class;
  std::string negative_class;
  std::vector<std::uint8_t> positive;  // per sample, 1 = positive group
  std::size_t positive_count = 0;
  std::size_t negative_count = 0;
};

/// Splits the labels into positive and negative groups. An empty
/// `positive_class` selects the last level in sorted order. Requires exactly
/// two levels with at least two samples each.
BinaryDesign binary_design(const ExpressionDataset& dataset, std::string_view positive_class = {});

/// Centers every gene to mean 0 and scales to sample SD 1 (denominator n-1).
/// Throws InvalidInput naming the first zero-variance gene.
ExpressionDataset standardize(const ExpressionDataset& dataset);

struct ConstantGeneFilter {
  ExpressionDataset dataset;
  std::vector<std::string> dropped;
};

/// Removes genes whose values are identical across all samples.
ConstantGeneFilter drop_constant_genes(const ExpressionDataset& dataset);

struct GeneSet {
  std::string name;
  std::string description;
  std::vector<std::string> genes;

  bool operator==(const GeneSet&) const = default;
};

/// Named gene sets in file order. Set names are unique, sets are non-empty
/// and genes within a set are unique.
class GeneSetCollection {
 public:
  GeneSetCollection() = default;
  explicit GeneSetCollection(std::vector<GeneSet> sets, std::string provenance = {});

  const std::vector<GeneSet>& sets() const noexcept { return sets_; }
  const std::string& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return sets_.size(); }
  bool empty() const noexcept { return sets_.empty(); }

  const GeneSet* find(std::string_view name) const;

  /// Distinct genes over all sets, in first-appearance order.
  std::vector<std::string> gene_universe() const;

  bool operator==(const GeneSetCollection& other) const {
    return sets_ == other.sets_ && provenance_ == other.provenance_;
  }

 private:
  std::vector<GeneSet> sets_;
  std::string provenance_;
};

struct RestrictedCollection {
  GeneSetCollection collection;
  std::vector<std::string> dropped_sets;
};

/// Intersects every set with the dataset's genes, preserving member order.
/// Sets left empty are dropped and listed; if every set empties, throws.
RestrictedCollection restrict_collection(const GeneSetCollection& collection, const ExpressionDataset& dataset);

/// Stratified K-fold assignment.
struct FoldAssignment {
  std::vector<std::size_t> fold_of_sample;
  std::size_t fold_count = 0;
  /// Set when some class has fewer than K samples.
  bool stratification_degraded = false;

  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::string fingerprint() const;

  bool operator==(const FoldAssignment&) const = default;
};

FoldAssignment make_folds(std::span<const std::string> labels, std::size_t folds, std::uint64_t seed);

}  // namespace samgsr
