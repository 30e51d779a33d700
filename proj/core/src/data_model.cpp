#include "samgsr/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <unordered_set>

#include "samgsr/error.hpp"
#include "samgsr/random.hpp"

namespace samgsr {

ExpressionDataset::ExpressionDataset(std::vector<std::string> gene_ids, std::vector<std::string> sample_ids,
                                     std::vector<double> values, std::vector<std::string> labels)
    : gene_ids_(std::move(gene_ids)),
      sample_ids_(std::move(sample_ids)),
      values_(std::move(values)),
      labels_(std::move(labels)) {
  if (labels_.size() != sample_ids_.size()) {
    throw InvalidInput("label count " + std::to_string(labels_.size()) + " does not match sample count " +
                       std::to_string(sample_ids_.size()));
  }
  if (values_.size() != gene_ids_.size() * sample_ids_.size()) {
    throw InvalidInput("expression matrix has " + std::to_string(values_.size()) + " cells, expected " +
                       std::to_string(gene_ids_.size()) + " x " + std::to_string(sample_ids_.size()));
  }
  index_.reserve(gene_ids_.size());
  for (std::size_t g = 0; g < gene_ids_.size(); ++g) {
    if (!index_.emplace(gene_ids_[g], g).second) throw InvalidInput("duplicate gene id '" + gene_ids_[g] + "'");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& id : sample_ids_) {
    if (!seen.insert(id).second) throw InvalidInput("duplicate sample id '" + id + "'");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidInput("non-finite expression value for gene '" + gene_ids_[i / sample_count()] + "', sample '" +
                         sample_ids_[i % sample_count()] + "'");
    }
  }
}

std::optional<std::size_t> ExpressionDataset::gene_index(std::string_view gene_id) const {
  const auto it = index_.find(std::string(gene_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ExpressionDataset::class_levels() const {
  std::set<std::string> levels(labels_.begin(), labels_.end());
  return {levels.begin(), levels.end()};
}

ExpressionDataset ExpressionDataset::select_samples(std::span<const std::size_t> samples) const {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  ids.reserve(samples.size());
  labels.reserve(samples.size());
  for (const auto s : samples) {
    ids.push_back(sample_ids_.at(s));
    labels.push_back(labels_.at(s));
  }
  std::vector<double> values;
  values.reserve(gene_count() * samples.size());
  for (std::size_t g = 0; g < gene_count(); ++g) {
    for (const auto s : samples) values.push_back(at(g, s));
  }
  return {gene_ids_, std::move(ids), std::move(values), std::move(labels)};
}

ExpressionDataset ExpressionDataset::select_genes(std::span<const std::size_t> genes) const {
  std::vector<std::string> ids;
  std::vector<double> values;
  ids.reserve(genes.size());
  values.reserve(genes.size() * sample_count());
  for (const auto g : genes) {
    ids.push_back(gene_ids_.at(g));
    const auto r = row(g);
    values.insert(values.end(), r.begin(), r.end());
  }
  return {std::move(ids), sample_ids_, std::move(values), labels_};
}

ExpressionDataset ExpressionDataset::with_labels(std::vector<std::string> labels) const {
  return {gene_ids_, sample_ids_, values_, std::move(labels)};
}

BinaryDesign binary_design(const ExpressionDataset& dataset, std::string_view positive_class) {
  const auto levels = dataset.class_levels();
  if (levels.size() != 2) {
    throw InvalidInput("two-group analysis needs exactly 2 class levels, found " + std::to_string(levels.size()));
  }
  BinaryDesign design;
  if (positive_class.empty()) {
    design.positive_class = levels[1];
    design.negative_class = levels[0];
  } else if (positive_class == levels[0] || positive_class == levels[1]) {
    design.positive_class = std::string(positive_class);
    design.negative_class = positive_class == levels[0] ? levels[1] : levels[0];
  } else {
    throw ConfigError("positive class '" + std::string(positive_class) + "' is not a label level");
  }
  design.positive.reserve(dataset.sample_count());
  for (const auto& label : dataset.labels()) {
    const bool pos = label == design.positive_class;
    design.positive.push_back(pos ? 1 : 0);
    (pos ? design.positive_count : design.negative_count) += 1;
  }
  if (design.positive_count < 2 || design.negative_count < 2) {
    throw InvalidInput("each group needs at least 2 samples (positive " + std::to_string(design.positive_count) +
                       ", negative " + std::to_string(design.negative_count) + ")");
  }
  return design;
}

ExpressionDataset standardize(const ExpressionDataset& dataset) {
  const std::size_t n = dataset.sample_count();
  if (n < 2) throw InvalidInput("standardize needs at least 2 samples");
  std::vector<double> out(dataset.values().size());
  for (std::size_t g = 0; g < dataset.gene_count(); ++g) {
    const auto r = dataset.row(g);
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (const double v : r) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw InvalidInput("gene '" + dataset.gene_ids()[g] + "' has zero variance");
    for (std::size_t s = 0; s < n; ++s) out[g * n + s] = (r[s] - mean) / sd;
  }
  return {dataset.gene_ids(), dataset.sample_ids(), std::move(out), dataset.labels()};
}

ConstantGeneFilter drop_constant_genes(const ExpressionDataset& dataset) {
  std::vector<std::size_t> keep;
  ConstantGeneFilter result;
  for (std::size_t g = 0; g < dataset.gene_count(); ++g) {
    const auto r = dataset.row(g);
    const bool constant = std::all_of(r.begin(), r.end(), [&](double v) { return v == r.front(); });
    if (constant) {
      result.dropped.push_back(dataset.gene_ids()[g]);
    } else {
      keep.push_back(g);
    }
  }
  result.dataset = result.dropped.empty() ? dataset : dataset.select_genes(keep);
  return result;
}

GeneSetCollection::GeneSetCollection(std::vector<GeneSet> sets, std::string provenance)
    : sets_(std::move(sets)), provenance_(std::move(provenance)) {
  std::unordered_set<std::string_view> names;
  for (const auto& set : sets_) {
    if (set.name.empty()) throw InvalidInput("gene set with empty name");
    if (!names.insert(set.name).second) throw InvalidInput("duplicate gene set name '" + set.name + "'");
    if (set.genes.empty()) throw InvalidInput("gene set '" + set.name + "' is empty");
    std::unordered_set<std::string_view> members;
    for (const auto& gene : set.genes) {
      if (!members.insert(gene).second) {
        throw InvalidInput("gene '" + gene + "' listed twice in set '" + set.name + "'");
      }
    }
  }
}

const GeneSet* GeneSetCollection::find(std::string_view name) const {
  const auto it = std::find_if(sets_.begin(), sets_.end(), [&](const GeneSet& s) { return s.name == name; });
  return it == sets_.end() ? nullptr : &*it;
}

std::vector<std::string> GeneSetCollection::gene_universe() const {
  std::vector<std::string> universe;
  std::unordered_set<std::string_view> seen;
  for (const auto& set : sets_) {
    for (const auto& gene : set.genes) {
      if (seen.insert(gene).second) universe.push_back(gene);
    }
  }
  return universe;
}

RestrictedCollection restrict_collection(const GeneSetCollection& collection, const ExpressionDataset& dataset) {
  RestrictedCollection result;
  std::vector<GeneSet> kept;
  for (const auto& set : collection.sets()) {
    GeneSet restricted{set.name, set.description, {}};
    for (const auto& gene : set.genes) {
      if (dataset.has_gene(gene)) restricted.genes.push_back(gene);
    }
    if (restricted.genes.empty()) {
      result.dropped_sets.push_back(set.name);
    } else {
      kept.push_back(std::move(restricted));
    }
  }
  if (kept.empty() && !collection.empty()) {
    throw InvalidInput("no gene set shares any gene with the expression data (" +
                       std::to_string(collection.size()) + " sets checked)");
  }
  result.collection = GeneSetCollection(std::move(kept), collection.provenance());
  return result;
}

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < fold_of_sample.size(); ++s) {
    if (fold_of_sample[s] != fold) out.push_back(s);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < fold_of_sample.size(); ++s) {
    if (fold_of_sample[s] == fold) out.push_back(s);
  }
  return out;
}

std::string FoldAssignment::fingerprint() const {
  std::string bytes;
  for (const auto f : fold_of_sample) bytes += std::to_string(f) + ",";
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buffer;
}

FoldAssignment make_folds(std::span<const std::string> labels, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidInput("fold count must be at least 2");
  if (folds > labels.size()) {
    throw InvalidInput("fold count " + std::to_string(folds) + " exceeds sample count " +
                       std::to_string(labels.size()));
  }
  const std::set<std::string> levels(labels.begin(), labels.end());
  Rng rng(derive_seed(seed, "folds"));

  // Shuffle within each class, then deal the concatenation round-robin: every
  // class is spread over as many folds as it has samples, and fold sizes
  // differ by at most one.
  std::vector<std::size_t> order;
  order.reserve(labels.size());
  FoldAssignment assignment;
  assignment.fold_count = folds;
  for (const auto& level : levels) {
    std::vector<std::size_t> members;
    for (std::size_t s = 0; s < labels.size(); ++s) {
      if (labels[s] == level) members.push_back(s);
    }
    if (members.size() < folds) assignment.stratification_degraded = true;
    std::shuffle(members.begin(), members.end(), rng);
    order.insert(order.end(), members.begin(), members.end());
  }
  assignment.fold_of_sample.assign(labels.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) assignment.fold_of_sample[order[pos]] = pos % folds;
  return assignment;
}

}  // namespace samgsr
