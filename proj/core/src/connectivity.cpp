#include "samgsr/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "samgsr/error.hpp"

namespace samgsr {

ConnectivityGraph::ConnectivityGraph(std::vector<std::string> gene_ids,
                                     std::vector<std::pair<std::size_t, std::size_t>> edges)
    : gene_ids_(std::move(gene_ids)), degree_(gene_ids_.size(), 0) {
  for (std::size_t i = 0; i < gene_ids_.size(); ++i) {
    if (!index_.emplace(gene_ids_[i], i).second) {
      throw InvalidInput("duplicate gene '" + gene_ids_[i] + "' in graph universe");
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (auto [a, b] : edges) {
    if (a >= gene_ids_.size() || b >= gene_ids_.size()) throw InvalidInput("edge endpoint out of range");
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    unique.emplace(a, b);
  }
  edges_.assign(unique.begin(), unique.end());
  for (const auto& [a, b] : edges_) {
    ++degree_[a];
    ++degree_[b];
  }
}

std::optional<std::size_t> ConnectivityGraph::index_of(std::string_view gene_id) const {
  const auto it = index_.find(std::string(gene_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

GraphBuild build_graph(std::span<const GenePair> edges, std::span<const std::string> universe) {
  std::vector<std::string> ids(universe.begin(), universe.end());
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!index.emplace(ids[i], i).second) throw InvalidInput("duplicate gene '" + ids[i] + "' in graph universe");
  }

  GraphBuildReport report;
  report.input_pairs = edges.size();
  std::set<std::pair<std::size_t, std::size_t>> unique;
  for (const auto& [first, second] : edges) {
    if (first.empty() || second.empty()) throw InvalidInput("edge with a missing endpoint");
    if (first == second) {
      ++report.self_loops;
      continue;
    }
    const auto a = index.find(first);
    const auto b = index.find(second);
    if (a == index.end() || b == index.end()) {
      ++report.dropped_edges;
      continue;
    }
    if (!unique.emplace(std::minmax(a->second, b->second)).second) ++report.duplicate_edges;
  }
  return {ConnectivityGraph(std::move(ids), {unique.begin(), unique.end()}), report};
}

std::optional<double> WeightVector::find(std::string_view gene_id) const {
  for (std::size_t i = 0; i < gene_ids.size(); ++i) {
    if (gene_ids[i] == gene_id) return values[i];
  }
  return std::nullopt;
}

WeightVector connectivity_weights(const ConnectivityGraph& graph) {
  WeightVector weights;
  weights.gene_ids = graph.gene_ids();
  weights.values.reserve(graph.gene_ids().size());
  for (std::size_t i = 0; i < graph.gene_ids().size(); ++i) {
    weights.values.push_back(1.0 + static_cast<double>(graph.degree(i)));
  }
  return weights;
}

std::string_view to_string(WeightNormalization scheme) {
  switch (scheme) {
    case WeightNormalization::mean_one:
      return "mean-one";
    case WeightNormalization::max_one:
      return "max-one";
    case WeightNormalization::sqrt_mean_one:
      return "sqrt-mean-one";
  }
  return "mean-one";
}

WeightNormalization parse_weight_normalization(std::string_view text) {
  if (text == "mean-one") return WeightNormalization::mean_one;
  if (text == "max-one") return WeightNormalization::max_one;
  if (text == "sqrt-mean-one") return WeightNormalization::sqrt_mean_one;
  throw ConfigError("unknown weight normalization '" + std::string(text) +
                    "' (expected mean-one, max-one or sqrt-mean-one)");
}

WeightVector normalize_weights(const WeightVector& weights, WeightNormalization scheme) {
  if (weights.values.empty()) throw InvalidInput("cannot normalize an empty weight vector");
  for (const double w : weights.values) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("weights must be finite and positive");
  }
  WeightVector out = weights;
  const auto n = static_cast<double>(weights.values.size());
  switch (scheme) {
    case WeightNormalization::mean_one: {
      const double mean = std::accumulate(weights.values.begin(), weights.values.end(), 0.0) / n;
      for (auto& w : out.values) w /= mean;
      break;
    }
    case WeightNormalization::max_one: {
      const double max = *std::max_element(weights.values.begin(), weights.values.end());
      for (auto& w : out.values) w /= max;
      break;
    }
    case WeightNormalization::sqrt_mean_one: {
      for (auto& w : out.values) w = std::sqrt(w);
      const double mean = std::accumulate(out.values.begin(), out.values.end(), 0.0) / n;
      for (auto& w : out.values) w /= mean;
      break;
    }
  }
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("spearman: length mismatch");
  if (x.size() < 2) throw InvalidInput("spearman: need at least 2 observations");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw InvalidInput("spearman: correlation undefined for a constant variable");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double setcount_vs_connectivity(const GeneSetCollection& collection, const WeightVector& weights) {
  std::unordered_map<std::string_view, std::size_t> membership;
  for (const auto& set : collection.sets()) {
    for (const auto& gene : set.genes) ++membership[gene];
  }
  std::vector<double> counts;
  std::vector<double> w;
  for (std::size_t i = 0; i < weights.gene_ids.size(); ++i) {
    const auto it = membership.find(weights.gene_ids[i]);
    if (it == membership.end()) continue;
    counts.push_back(static_cast<double>(it->second));
    w.push_back(weights.values[i]);
  }
  if (counts.size() < 3) {
    throw InvalidInput("need at least 3 genes shared by the gene sets and the weights, found " +
                       std::to_string(counts.size()));
  }
  return spearman(counts, w);
}

}  // namespace samgsr
