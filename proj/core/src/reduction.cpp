#include "samgsr/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "samgsr/error.hpp"
#include "samgsr/parallel.hpp"
#include "samgsr/random.hpp"

namespace samgsr {

ReductionTrace SetReduction::at(double c_star) const {
  ReductionTrace trace;
  trace.set_name = set_name;
  trace.ordered_genes = ordered_genes;
  trace.ordered_statistic = ordered_statistic;
  trace.tied_pairs = tied_pairs;
  trace.exhausted = true;
  trace.stop_k = ordered_genes.size();
  for (std::size_t k = 1; k <= residual_p.size(); ++k) {
    trace.c_values.push_back(residual_p[k - 1]);
    if (residual_p[k - 1] > c_star) {
      trace.stop_k = k;
      trace.exhausted = false;
      break;
    }
  }
  trace.core.assign(ordered_genes.begin(), ordered_genes.begin() + static_cast<std::ptrdiff_t>(trace.stop_k));
  return trace;
}

SetReduction reduction_profile(const PermutationNull& null, const GeneSet& set) {
  std::vector<std::size_t> locals;
  locals.reserve(set.genes.size());
  for (const auto& gene : set.genes) {
    const auto local = null.local_index(gene);
    if (!local) throw InvalidInput("gene '" + gene + "' of set '" + set.name + "' has no statistic");
    locals.push_back(*local);
  }
  std::sort(locals.begin(), locals.end(), [&](std::size_t a, std::size_t b) {
    const double ma = std::fabs(null.observed(a));
    const double mb = std::fabs(null.observed(b));
    if (ma != mb) return ma > mb;
    return null.genes()[a] < null.genes()[b];
  });

  SetReduction reduction;
  reduction.set_name = set.name;
  for (std::size_t i = 0; i < locals.size(); ++i) {
    reduction.ordered_genes.push_back(null.genes()[locals[i]]);
    reduction.ordered_statistic.push_back(null.observed(locals[i]));
    if (i > 0 && std::fabs(null.observed(locals[i])) == std::fabs(null.observed(locals[i - 1]))) {
      ++reduction.tied_pairs;
    }
  }
  reduction.residual_p = null.residual_pvalues(locals);
  return reduction;
}

std::vector<SetPValue> screen_sets(const SetPValueTable& table, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("set-level alpha must lie in (0, 1]");
  std::vector<SetPValue> kept;
  for (const auto& row : table.rows) {
    if (row.p_value <= alpha) kept.push_back(row);
  }
  std::sort(kept.begin(), kept.end(), [](const SetPValue& a, const SetPValue& b) {
    if (a.p_value != b.p_value) return a.p_value < b.p_value;
    return a.set_name < b.set_name;
  });
  return kept;
}

ReductionTrace reduce_set(const ExpressionDataset& dataset, const GeneSet& set, const PermutationPlan& plan,
                          const StatConfig& config, double c_star) {
  if (!(c_star > 0.0 && c_star <= 1.0)) throw ConfigError("reduction threshold must lie in (0, 1]");
  const PermutationNull null(dataset, plan, config, set.genes);
  return reduction_profile(null, set).at(c_star);
}

std::vector<std::string> Signature::gene_names() const {
  std::vector<std::string> names;
  names.reserve(genes.size());
  for (const auto& g : genes) names.push_back(g.gene);
  return names;
}

void SamgsrConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("set-level alpha must lie in (0, 1]");
  if (!(c_star > 0.0 && c_star <= 1.0)) throw ConfigError("reduction threshold c* must lie in (0, 1]");
  if (permutations < 1) throw ConfigError("permutation count must be at least 1");
  if (s0.kind == S0Method::Kind::fixed && !(s0.value > 0.0)) throw ConfigError("fixed s0 must be positive");
  if (s0.kind == S0Method::Kind::percentile && !(s0.value >= 0.0 && s0.value <= 100.0)) {
    throw ConfigError("s0 percentile must lie in [0, 100]");
  }
}

std::string SamgsrConfig::fingerprint() const {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer,
                "weighted=%d;alpha=%.17g;c_star=%.17g;permutations=%zu;seed=%llu;s0=%s;normalization=%s;positive=%s",
                weighted ? 1 : 0, alpha, c_star, permutations, static_cast<unsigned long long>(seed),
                to_string(s0).c_str(), std::string(to_string(normalization)).c_str(), positive_class.c_str());
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(buffer)));
  return hex;
}

SamgsrProfile::SamgsrProfile(SamgsrConfig config, SamgsrResult base, std::vector<SetReduction> reductions)
    : config_(std::move(config)), base_(std::move(base)), reductions_(std::move(reductions)) {}

SamgsrResult SamgsrProfile::at(double c_star) const {
  SamgsrConfig config = config_;
  config.c_star = c_star;
  config.validate();

  SamgsrResult result = base_;
  std::map<std::string, SignatureGene> merged;
  for (const auto& reduction : reductions_) {
    ReductionTrace trace = reduction.at(c_star);
    if (trace.exhausted) result.warnings.push_back("reduction of '" + trace.set_name + "' exhausted the set");
    for (std::size_t r = 0; r < trace.core.size(); ++r) {
      auto& gene = merged[trace.core[r]];
      gene.gene = trace.core[r];
      gene.statistic = trace.ordered_statistic[r];
      gene.source_sets.push_back(trace.set_name);
      gene.ranks.push_back(r + 1);
    }
    result.traces.push_back(std::move(trace));
  }
  for (auto& [name, gene] : merged) result.signature.genes.push_back(std::move(gene));
  std::sort(result.signature.genes.begin(), result.signature.genes.end(),
            [](const SignatureGene& a, const SignatureGene& b) {
              const double ma = std::fabs(a.statistic), mb = std::fabs(b.statistic);
              if (ma != mb) return ma > mb;
              return a.gene < b.gene;
            });
  result.signature.config_fingerprint = config.fingerprint();
  if (result.signature.empty()) result.warnings.push_back("no gene set passed screening; signature is empty");
  return result;
}

WeightVector dataset_weights(const ExpressionDataset& dataset, const ConnectivityGraph& graph,
                             WeightNormalization scheme, std::size_t* missing) {
  WeightVector raw;
  raw.gene_ids = dataset.gene_ids();
  raw.values.reserve(dataset.gene_count());
  std::size_t absent = 0;
  for (const auto& gene : dataset.gene_ids()) {
    const auto node = graph.index_of(gene);
    if (!node) ++absent;
    raw.values.push_back(node ? 1.0 + static_cast<double>(graph.degree(*node)) : 1.0);
  }
  if (missing) *missing = absent;
  return normalize_weights(raw, scheme);
}

SamgsrProfile profile_samgsr(const ExpressionDataset& dataset, const GeneSetCollection& collection,
                             const ConnectivityGraph* graph, const SamgsrConfig& config) {
  config.validate();
  if (config.weighted && graph == nullptr) {
    throw ConfigError("weighted SAMGSR needs a connectivity graph (PPI edge list)");
  }

  SamgsrResult base;
  StatConfig stat;
  stat.positive_class = config.positive_class;
  stat.s0 = config.s0;
  stat.weighted = config.weighted;
  if (config.weighted) {
    std::size_t missing = 0;
    stat.weights = dataset_weights(dataset, *graph, config.normalization, &missing);
    if (missing > 0) {
      base.warnings.push_back(std::to_string(missing) + " genes absent from the graph were treated as isolated");
    }
  }
  base.positive_class = binary_design(dataset, config.positive_class).positive_class;

  const PermutationPlan plan = build_plan(dataset.labels(), config.permutations, config.seed);
  base.exhaustive_plan = plan.exhaustive;
  base.permutations_used = plan.size();

  std::vector<SetReduction> reductions;
  const auto universe = collection.gene_universe();
  if (!universe.empty()) {
    const PermutationNull null(dataset, plan, stat, universe);
    base.s0 = null.observed_s0();
    for (const auto& set : collection.sets()) {
      std::vector<std::size_t> locals;
      locals.reserve(set.genes.size());
      for (const auto& gene : set.genes) {
        const auto local = null.local_index(gene);
        if (!local) throw InvalidInput("gene '" + gene + "' of set '" + set.name + "' is not in the expression data");
        locals.push_back(*local);
      }
      SetPValue row = null.score(locals);
      row.set_name = set.name;
      base.pvalues.rows.push_back(std::move(row));
    }

    const auto screened = screen_sets(base.pvalues, config.alpha);
    reductions.resize(screened.size());
    parallel_for(screened.size(), [&](std::size_t i) {
      reductions[i] = reduction_profile(null, *collection.find(screened[i].set_name));
    });
    for (const auto& row : screened) base.screened_sets.push_back(row.set_name);
  }
  return {config, std::move(base), std::move(reductions)};
}

SamgsrResult run_samgsr(const ExpressionDataset& dataset, const GeneSetCollection& collection,
                        const ConnectivityGraph* graph, const SamgsrConfig& config) {
  return profile_samgsr(dataset, collection, graph, config).at(config.c_star);
}

}  // namespace samgsr
