#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "samgsr/data_model.hpp"

namespace samgsr {

using GenePair = std::pair<std::string, std::string>;

/// Undirected, unweighted gene interaction graph over a fixed universe.
/// Edges are stored once as (lower index, higher index); self-loops are never
/// stored because every gene's own contribution is added at weight time.
class ConnectivityGraph {
 public:
  ConnectivityGraph() = default;
  ConnectivityGraph(std::vector<std::string> gene_ids, std::vector<std::pair<std::size_t, std::size_t>> edges);

  const std::vector<std::string>& gene_ids() const noexcept { return gene_ids_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t degree(std::size_t node) const { return degree_.at(node); }
  std::optional<std::size_t> index_of(std::string_view gene_id) const;

  bool operator==(const ConnectivityGraph& other) const {
    return gene_ids_ == other.gene_ids_ && edges_ == other.edges_;
  }

 private:
  std::vector<std::string> gene_ids_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::size_t> degree_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct GraphBuildReport {
  std::size_t input_pairs = 0;
  std::size_t duplicate_edges = 0;  // repeats, including reversed repeats
  std::size_t self_loops = 0;
  std::size_t dropped_edges = 0;  // an endpoint outside the universe

  bool operator==(const GraphBuildReport&) const = default;
};

struct GraphBuild {
  ConnectivityGraph graph;
  GraphBuildReport report;
};

/// Restricts an edge list to `universe` and merges duplicates. Genes of the
/// universe without edges become isolated nodes.
GraphBuild build_graph(std::span<const GenePair> edges, std::span<const std::string> universe);

/// Per-gene weights aligned with `gene_ids`.
struct WeightVector {
  std::vector<std::string> gene_ids;
  std::vector<double> values;

  std::optional<double> find(std::string_view gene_id) const;
  bool operator==(const WeightVector&) const = default;
};

/// w_i = sum_j a_ij with a_ii = 1, i.e. 1 + degree(i).
WeightVector connectivity_weights(const ConnectivityGraph& graph);

enum class WeightNormalization { mean_one, max_one, sqrt_mean_one };

std::string_view to_string(WeightNormalization scheme);
WeightNormalization parse_weight_normalization(std::string_view text);

/// Rescales weights; every scheme is a positive monotone map, so the order of
/// genes by weight is unchanged.
WeightVector normalize_weights(const WeightVector& weights, WeightNormalization scheme);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

/// Spearman correlation between each gene's set-membership count and its
/// connectivity weight, over genes present in both the collection and the
/// weight vector. Needs at least 3 common genes.
double setcount_vs_connectivity(const GeneSetCollection& collection, const WeightVector& weights);

}  // namespace samgsr
