#include "samgsr/permutation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "samgsr/error.hpp"
#include "samgsr/parallel.hpp"
#include "samgsr/random.hpp"

namespace samgsr {

__extension__ typedef unsigned __int128 Wide;

std::uint64_t distinct_assignments(std::span<const std::string> labels, std::uint64_t cap) {
  std::map<std::string_view, std::uint64_t> counts;
  for (const auto& label : labels) ++counts[label];
  // n! / prod(c_k!) as a product of binomials C(placed + c_k, c_k). Each
  // binomial is built as C(p+j, j) = C(p+j-1, j-1) * (p+j) / j, exact in
  // 128-bit arithmetic; results saturate at `cap`.
  Wide total = 1;
  std::uint64_t placed = 0;
  for (const auto& [label, count] : counts) {
    Wide binom = 1;
    for (std::uint64_t j = 1; j <= count; ++j) {
      binom = binom * (placed + j) / j;
      if (binom >= cap) return cap;
    }
    placed += count;
    total *= binom;
    if (total >= cap) return cap;
  }
  return static_cast<std::uint64_t>(total);
}

PermutationPlan build_plan(std::span<const std::string> labels, std::size_t permutations, std::uint64_t seed) {
  if (permutations < 1) throw InvalidInput("permutation count must be at least 1");
  if (labels.empty()) throw InvalidInput("cannot permute an empty label vector");
  PermutationPlan plan;
  plan.sample_count = labels.size();
  plan.requested = permutations;
  plan.seed = seed;

  const std::uint64_t cap = static_cast<std::uint64_t>(permutations) + 1;
  const std::uint64_t distinct = distinct_assignments(labels, cap);
  if (distinct <= permutations) {
    plan.exhaustive = true;
    std::vector<std::string_view> arrangement(labels.begin(), labels.end());
    std::sort(arrangement.begin(), arrangement.end());
    do {
      // Turn the label arrangement into a bijection: position i takes the next
      // unused original sample carrying arrangement[i].
      std::unordered_map<std::string_view, std::size_t> cursor;
      std::vector<std::uint32_t> perm(labels.size());
      for (std::size_t i = 0; i < labels.size(); ++i) {
        std::size_t& from = cursor[arrangement[i]];
        while (labels[from] != arrangement[i]) ++from;
        perm[i] = static_cast<std::uint32_t>(from++);
      }
      plan.permutations.push_back(std::move(perm));
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    return plan;
  }

  Rng rng(derive_seed(seed, "permutation-plan"));
  std::vector<std::uint32_t> identity(labels.size());
  std::iota(identity.begin(), identity.end(), 0U);
  plan.permutations.reserve(permutations);
  for (std::size_t b = 0; b < permutations; ++b) {
    auto perm = identity;
    std::shuffle(perm.begin(), perm.end(), rng);
    plan.permutations.push_back(std::move(perm));
  }
  return plan;
}

const SetPValue* SetPValueTable::find(std::string_view set_name) const {
  const auto it = std::find_if(rows.begin(), rows.end(), [&](const SetPValue& r) { return r.set_name == set_name; });
  return it == rows.end() ? nullptr : &*it;
}

std::vector<double> aligned_weights(const ExpressionDataset& dataset, const StatConfig& config) {
  if (!config.weighted) return {};
  if (!config.weights) throw ConfigError("weighted statistics requested without weights");
  std::unordered_map<std::string_view, double> lookup;
  for (std::size_t i = 0; i < config.weights->gene_ids.size(); ++i) {
    lookup.emplace(config.weights->gene_ids[i], config.weights->values[i]);
  }
  std::vector<double> aligned(dataset.gene_count());
  for (std::size_t g = 0; g < dataset.gene_count(); ++g) {
    const auto it = lookup.find(dataset.gene_ids()[g]);
    if (it == lookup.end()) throw InvalidInput("no weight for gene '" + dataset.gene_ids()[g] + "'");
    aligned[g] = it->second;
  }
  return aligned;
}

PermutationNull::PermutationNull(const ExpressionDataset& dataset, const PermutationPlan& plan,
                                 const StatConfig& config, std::span<const std::string> genes)
    : genes_(genes.begin(), genes.end()), permutations_(plan.size()) {
  if (plan.sample_count != dataset.sample_count()) {
    throw InvalidInput("permutation plan covers " + std::to_string(plan.sample_count) + " samples, dataset has " +
                       std::to_string(dataset.sample_count()));
  }
  if (permutations_ == 0) throw InvalidInput("empty permutation plan");
  const BinaryDesign design = binary_design(dataset, config.positive_class);
  const auto weights = aligned_weights(dataset, config);

  std::vector<std::size_t> rows;
  rows.reserve(genes_.size());
  for (const auto& gene : genes_) {
    index_.emplace(gene, rows.size());
    const auto g = dataset.gene_index(gene);
    if (!g) throw InvalidInput("gene '" + gene + "' is not in the expression data");
    rows.push_back(*g);
  }

  observed_stats_ = sam_statistic(dataset, design, config.s0);
  if (config.weighted) observed_stats_ = weighted_sam_statistic(observed_stats_, *config.weights);
  observed_s0_ = observed_stats_.s0;

  // The observed statistics are evaluated through the kernel as well so that
  // a permutation reproducing the observed assignment ties it exactly.
  const SamKernel kernel(dataset);
  {
    SamKernel::Workspace ws;
    observed_.resize(rows.size());
    kernel.evaluate(design.positive, config.s0, rows, observed_, ws);
    if (config.weighted) {
      for (std::size_t k = 0; k < rows.size(); ++k) observed_[k] = weights[rows[k]] * observed_[k];
    }
  }

  null_.assign(rows.size() * permutations_, 0.0);
  const std::size_t n = dataset.sample_count();
  parallel_for(permutations_, [&](std::size_t b) {
    const auto& perm = plan.permutations[b];
    std::vector<std::uint8_t> positive(n);
    for (std::size_t i = 0; i < n; ++i) positive[i] = design.positive[perm[i]];
    SamKernel::Workspace ws;
    std::vector<double> d(rows.size());
    kernel.evaluate(positive, config.s0, rows, d, ws);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      null_[k * permutations_ + b] = config.weighted ? weights[rows[k]] * d[k] : d[k];
    }
  });
}

std::optional<std::size_t> PermutationNull::local_index(std::string_view gene_id) const {
  const auto it = index_.find(std::string(gene_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SetPValue PermutationNull::score(std::span<const std::size_t> locals) const {
  if (locals.empty()) throw InvalidInput("cannot score an empty gene subset");
  double observed = 0.0;
  std::vector<double> acc(permutations_, 0.0);
  for (auto it = locals.rbegin(); it != locals.rend(); ++it) {
    const double x = observed_[*it];
    observed += x * x;
    const double* column = null_.data() + *it * permutations_;
    for (std::size_t b = 0; b < permutations_; ++b) acc[b] += column[b] * column[b];
  }
  std::size_t exceed = 0;
  for (const double s : acc) exceed += s >= observed ? 1 : 0;
  SetPValue out;
  out.size = locals.size();
  out.observed = observed;
  out.permutations = permutations_;
  out.p_value = static_cast<double>(1 + exceed) / static_cast<double>(1 + permutations_);
  return out;
}

std::vector<double> PermutationNull::residual_pvalues(std::span<const std::size_t> ordered) const {
  const std::size_t m = ordered.size();
  std::vector<double> c(m > 0 ? m - 1 : 0, 1.0);
  double observed = 0.0;
  std::vector<double> acc(permutations_, 0.0);
  // Accumulating from the tail makes each prefix of this loop the score of
  // the residual ordered[k..m-1], summed in the same order as score().
  for (std::size_t j = m; j-- > 1;) {
    const double x = observed_[ordered[j]];
    observed += x * x;
    const double* column = null_.data() + ordered[j] * permutations_;
    std::size_t exceed = 0;
    for (std::size_t b = 0; b < permutations_; ++b) {
      acc[b] += column[b] * column[b];
      exceed += acc[b] >= observed ? 1 : 0;
    }
    c[j - 1] = static_cast<double>(1 + exceed) / static_cast<double>(1 + permutations_);
  }
  return c;
}

SetPValueTable set_pvalues(const ExpressionDataset& dataset, const GeneSetCollection& collection,
                           const PermutationPlan& plan, const StatConfig& config) {
  const auto universe = collection.gene_universe();
  SetPValueTable table;
  if (universe.empty()) return table;
  const PermutationNull null(dataset, plan, config, universe);
  for (const auto& set : collection.sets()) {
    std::vector<std::size_t> locals;
    locals.reserve(set.genes.size());
    for (const auto& gene : set.genes) locals.push_back(*null.local_index(gene));
    SetPValue row = null.score(locals);
    row.set_name = set.name;
    table.rows.push_back(std::move(row));
  }
  return table;
}

double subset_pvalue(const ExpressionDataset& dataset, std::span<const std::string> genes,
                     const PermutationPlan& plan, const StatConfig& config) {
  if (genes.empty()) throw InvalidInput("subset_pvalue called with an empty gene subset");
  const PermutationNull null(dataset, plan, config, genes);
  std::vector<std::size_t> locals(genes.size());
  std::iota(locals.begin(), locals.end(), 0);
  return null.score(locals).p_value;
}

}  // namespace samgsr
