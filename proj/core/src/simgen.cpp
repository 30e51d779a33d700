#include "samgsr/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "samgsr/error.hpp"
#include "samgsr/parallel.hpp"
#include "samgsr/random.hpp"

namespace samgsr {
namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::string generic_gene_id(std::size_t i, std::size_t universe) {
  const std::size_t width = std::max<std::size_t>(4, std::to_string(universe).size());
  std::string digits = std::to_string(i + 1);
  return "G" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

// Preferential attachment: a seed clique of m+1 nodes, then every new node
// links to m distinct earlier nodes drawn proportionally to degree.
std::vector<std::pair<std::size_t, std::size_t>> attachment_graph(std::size_t nodes, std::size_t m, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> endpoints;
  const std::size_t seed_nodes = std::min(nodes, m + 1);
  for (std::size_t a = 0; a < seed_nodes; ++a) {
    for (std::size_t b = a + 1; b < seed_nodes; ++b) {
      edges.emplace_back(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  }
  for (std::size_t v = seed_nodes; v < nodes; ++v) {
    std::set<std::size_t> targets;
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (targets.size() < m) targets.insert(endpoints[pick(rng)]);
    for (const auto t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return edges;
}

ExpressionDataset draw_dataset(const SimConfig& config, std::span<const std::string> gene_ids,
                               std::span<const std::size_t> planted_rows, std::size_t n, const std::string& prefix,
                               std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t G = gene_ids.size();
  std::vector<double> values(G * n);
  std::vector<std::string> labels(n), samples(n);
  std::vector<double> planted_values(planted_rows.size());
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t g = 0; g < G; ++g) values[g * n + s] = normal(rng);
    for (std::size_t k = 0; k < planted_rows.size(); ++k) planted_values[k] = values[planted_rows[k] * n + s];
    const double logit = planted_logit(config.planted, planted_values);
    const bool positive = config.label_model == LabelModel::threshold
                              ? logit > 0.0
                              : std::bernoulli_distribution(sigmoid(logit))(rng);
    labels[s] = positive ? config.positive_class : config.negative_class;
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%s%03zu", prefix.c_str(), s + 1);
    samples[s] = buffer;
  }
  return {std::vector<std::string>(gene_ids.begin(), gene_ids.end()), std::move(samples), std::move(values),
          std::move(labels)};
}

std::vector<std::size_t> planted_rows_of(std::span<const PlantedGene> planted, std::span<const std::string> gene_ids) {
  std::vector<std::size_t> rows;
  for (const auto& p : planted) {
    const auto it = std::find(gene_ids.begin(), gene_ids.end(), p.gene);
    if (it == gene_ids.end()) throw InvalidInput("planted gene '" + p.gene + "' is not in the gene universe");
    rows.push_back(static_cast<std::size_t>(it - gene_ids.begin()));
  }
  return rows;
}

}  // namespace

std::string_view to_string(LabelModel model) {
  return model == LabelModel::threshold ? "threshold" : "bernoulli";
}

LabelModel parse_label_model(std::string_view text) {
  if (text == "bernoulli") return LabelModel::bernoulli;
  if (text == "threshold") return LabelModel::threshold;
  throw ConfigError("unknown label model '" + std::string(text) + "' (expected bernoulli or threshold)");
}

std::vector<PlantedGene> default_planted_genes() {
  return {{"HDAC1", 0.37, 0.99, {0}}, {"GNAS", -0.86, 0.5, {0, 1}}};
}

TuningConfig default_study_tuning() {
  TuningConfig t;
  t.samgsr.alpha = 0.5;
  return t;
}

void SimConfig::validate() const {
  if (n_train < 4 || n_test < 1) throw ConfigError("simulation needs at least 4 training and 1 test sample");
  if (planted.empty()) throw ConfigError("simulation needs at least one planted gene");
  std::set<std::string> names;
  for (const auto& p : planted) {
    if (!std::isfinite(p.coefficient) || p.coefficient == 0.0) {
      throw ConfigError("planted coefficient of '" + p.gene + "' must be finite and nonzero");
    }
    if (!(p.degree_quantile >= 0.0 && p.degree_quantile <= 1.0)) {
      throw ConfigError("planted degree quantile must lie in [0, 1]");
    }
    if (!names.insert(p.gene).second) throw ConfigError("planted gene '" + p.gene + "' listed twice");
    for (const auto k : p.sets) {
      if (k >= small_sets.size()) throw ConfigError("planted gene '" + p.gene + "' refers to a missing small set");
    }
  }
  if (attachment < 1) throw ConfigError("attachment must be at least 1");
  if (small_sets.size() >= set_count) throw ConfigError("the design needs at least one background set");
  std::vector<std::size_t> hosted(small_sets.size(), 0);
  for (const auto& p : planted) {
    for (const auto k : p.sets) ++hosted[k];
  }
  std::size_t filler = 0;
  for (std::size_t k = 0; k < small_sets.size(); ++k) {
    if (small_sets[k] < std::max<std::size_t>(hosted[k], 1)) {
      throw ConfigError("small set " + std::to_string(k + 1) + " cannot hold its planted genes");
    }
    filler += small_sets[k] - hosted[k];
  }
  if (universe < std::max(attachment + 2, planted.size() + filler + set_count)) {
    throw ConfigError("gene universe too small for the requested design");
  }
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw ConfigError("set overlap must lie in [0, 1]");
}

SyntheticDesign synthetic_design(const SimConfig& config) {
  config.validate();
  const std::size_t N = config.universe;
  Rng graph_rng(derive_seed(config.seed, "design-graph"));
  const auto edges = attachment_graph(N, config.attachment, graph_rng);

  std::vector<std::size_t> degree(N, 0);
  for (const auto& [a, b] : edges) {
    ++degree[a];
    ++degree[b];
  }
  std::vector<std::size_t> by_degree(N);
  std::iota(by_degree.begin(), by_degree.end(), 0);
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] < degree[b]; });

  SyntheticDesign design;
  for (std::size_t i = 0; i < N; ++i) design.gene_ids.push_back(generic_gene_id(i, N));
  std::vector<bool> taken(N, false);
  std::vector<std::size_t> planted_nodes;
  for (const auto& p : config.planted) {
    auto rank = static_cast<std::size_t>(std::llround(p.degree_quantile * static_cast<double>(N - 1)));
    while (taken[by_degree[rank]]) rank = (rank + 1) % N;
    const std::size_t node = by_degree[rank];
    taken[node] = true;
    planted_nodes.push_back(node);
    design.gene_ids[node] = p.gene;
  }
  for (const auto& [a, b] : edges) design.edges.emplace_back(design.gene_ids[a], design.gene_ids[b]);
  design.graph = ConnectivityGraph(design.gene_ids, edges);

  Rng set_rng(derive_seed(config.seed, "design-sets"));
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < N; ++i) {
    if (!taken[i]) others.push_back(i);
  }
  std::shuffle(others.begin(), others.end(), set_rng);

  std::vector<std::vector<std::size_t>> members(config.set_count);
  for (std::size_t p = 0; p < config.planted.size(); ++p) {
    for (const auto k : config.planted[p].sets) members[k].push_back(planted_nodes[p]);
  }
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < config.small_sets.size(); ++k) {
    while (members[k].size() < config.small_sets[k]) members[k].push_back(others[cursor++]);
  }
  const std::size_t rest = others.size() - cursor;
  const std::size_t background = config.set_count - config.small_sets.size();
  for (std::size_t k = 0; k < background; ++k) {
    const std::size_t lo = cursor + rest * k / background;
    const std::size_t hi = cursor + rest * (k + 1) / background;
    auto& set = members[config.small_sets.size() + k];
    set.assign(others.begin() + static_cast<std::ptrdiff_t>(lo), others.begin() + static_cast<std::ptrdiff_t>(hi));
    std::vector<std::size_t> outside;
    for (std::size_t j = 0; j < others.size(); ++j) {
      if (j < lo || j >= hi) outside.push_back(others[j]);
    }
    const auto borrow =
        std::min(outside.size(), static_cast<std::size_t>(std::llround(config.overlap * static_cast<double>(set.size()))));
    std::shuffle(outside.begin(), outside.end(), set_rng);
    set.insert(set.end(), outside.begin(), outside.begin() + static_cast<std::ptrdiff_t>(borrow));
  }

  std::vector<GeneSet> sets;
  for (std::size_t k = 0; k < members.size(); ++k) {
    std::sort(members[k].begin(), members[k].end());
    GeneSet set;
    set.name = "SIM_SET_" + std::to_string(k + 1);
    set.description = k < config.small_sets.size() ? "small" : "background";
    for (const auto node : members[k]) set.genes.push_back(design.gene_ids[node]);
    sets.push_back(std::move(set));
  }
  design.collection = GeneSetCollection(std::move(sets), "synthetic");
  return design;
}

double planted_logit(std::span<const PlantedGene> planted, std::span<const double> values) {
  if (planted.size() != values.size()) throw InvalidInput("planted value count does not match the planted genes");
  double logit = 0.0;
  for (std::size_t k = 0; k < planted.size(); ++k) logit += planted[k].coefficient * values[k];
  return logit;
}

SimulatedData simulate_dataset(const SimConfig& config, std::span<const std::string> gene_ids, std::uint64_t seed) {
  config.validate();
  const auto rows = planted_rows_of(config.planted, gene_ids);
  SimulatedData data;
  data.train = draw_dataset(config, gene_ids, rows, config.n_train, "train_", derive_seed(seed, "sim-train"));
  data.test = draw_dataset(config, gene_ids, rows, config.n_test, "test_", derive_seed(seed, "sim-test"));
  return data;
}

SimulatedData simulate_dataset(const SimConfig& config) {
  const auto design = synthetic_design(config);
  return simulate_dataset(config, design.gene_ids, config.seed);
}

SimulatedData resimulate_from_real(const ExpressionDataset& expression, const ResimConfig& config) {
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) throw ConfigError("test fraction must lie in (0, 1)");
  const auto rows = planted_rows_of(config.planted, expression.gene_ids());
  const ExpressionDataset standard = standardize(expression);
  const std::size_t n = standard.sample_count();

  Rng rng(derive_seed(config.seed, "resim-labels"));
  std::vector<std::string> labels(n);
  std::vector<double> planted_values(rows.size());
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t k = 0; k < rows.size(); ++k) planted_values[k] = standard.at(rows[k], s);
    const double p = sigmoid(planted_logit(config.planted, planted_values));
    labels[s] = std::bernoulli_distribution(p)(rng) ? config.positive_class : config.negative_class;
  }
  const ExpressionDataset relabelled = standard.with_labels(std::move(labels));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_test = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(config.test_fraction * static_cast<double>(n))), 1, n - 1);
  std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {relabelled.select_samples(train), relabelled.select_samples(test)};
}

double MethodSummary::mean_signature_size() const {
  if (signature_sizes.empty()) return 0.0;
  return static_cast<double>(std::accumulate(signature_sizes.begin(), signature_sizes.end(), std::size_t{0})) /
         static_cast<double>(signature_sizes.size());
}

double MethodSummary::selection_percent(std::size_t planted) const {
  if (signature_sizes.empty()) return 0.0;
  return 100.0 * static_cast<double>(planted_hits.at(planted)) / static_cast<double>(signature_sizes.size());
}

EvalReport MethodSummary::mean_test_report() const {
  EvalReport mean;
  if (test_reports.empty()) return mean;
  for (const auto& r : test_reports) {
    mean.error_rate += r.error_rate;
    mean.gbs += r.gbs;
    mean.bcm += r.bcm;
    mean.aupr += r.aupr;
    mean.n_samples += r.n_samples;
  }
  const double k = static_cast<double>(test_reports.size());
  mean.error_rate /= k;
  mean.gbs /= k;
  mean.bcm /= k;
  mean.aupr /= k;
  mean.n_samples /= test_reports.size();
  mean.classes = test_reports.front().classes;
  return mean;
}

ReplicateSummary replicate_study(const StudyConfig& config) {
  if (config.replicates < 1) throw ConfigError("replicate count must be at least 1");
  config.tuning.validate();
  const SyntheticDesign design = synthetic_design(config.sim);
  const std::size_t R = config.replicates;
  const std::size_t P = config.sim.planted.size();

  struct Outcome {
    std::size_t size = 0;
    double c_star = 0.0;
    std::vector<bool> hits;
    std::vector<std::string> genes;
    EvalReport report;
  };
  std::vector<Outcome> outcomes(R * 2);

  parallel_for(R, [&](std::size_t r) {
    const SimulatedData data =
        simulate_dataset(config.sim, design.gene_ids, derive_seed(config.sim.seed, "replicate-data", r));
    const auto collection = restrict_collection(design.collection, data.train).collection;
    const std::uint64_t pipeline_seed = derive_seed(config.sim.seed, "replicate-pipeline", r);
    for (std::size_t method = 0; method < 2; ++method) {
      TuningConfig tuning = config.tuning;
      tuning.seed = pipeline_seed;
      tuning.samgsr.seed = pipeline_seed;
      tuning.samgsr.weighted = method == 1;
      tuning.samgsr.positive_class = config.sim.positive_class;
      const PipelineRun run = run_pipeline(data.train, collection, &design.graph, tuning);

      Outcome& out = outcomes[r * 2 + method];
      out.size = run.selection.signature.size();
      out.c_star = run.tuning.chosen_c_star;
      out.genes = run.selection.signature.gene_names();
      for (const auto& p : config.sim.planted) {
        out.hits.push_back(std::find(out.genes.begin(), out.genes.end(), p.gene) != out.genes.end());
      }
      out.report = evaluate(predict(run.model, data.test), data.test.labels());
    }
  });

  ReplicateSummary summary;
  summary.replicates = R;
  summary.planted = config.sim.planted;
  const WeightVector weights =
      normalize_weights(connectivity_weights(design.graph), WeightNormalization::mean_one);
  for (const auto& p : config.sim.planted) {
    summary.planted_degrees.push_back(design.graph.degree(*design.graph.index_of(p.gene)));
    summary.planted_weights.push_back(*weights.find(p.gene));
  }
  for (std::size_t method = 0; method < 2; ++method) {
    MethodSummary m;
    m.method = method == 1 ? "weighted" : "unweighted";
    m.planted_hits.assign(P, 0);
    std::vector<std::vector<std::string>> lists;
    for (std::size_t r = 0; r < R; ++r) {
      const Outcome& out = outcomes[r * 2 + method];
      m.signature_sizes.push_back(out.size);
      m.chosen_c_star.push_back(out.c_star);
      for (std::size_t k = 0; k < P; ++k) m.planted_hits[k] += out.hits[k] ? 1 : 0;
      m.test_reports.push_back(out.report);
      lists.push_back(out.genes);
    }
    m.rand_gene = R >= 2 ? rand_index(lists) : 1.0;
    summary.methods.push_back(std::move(m));
  }
  return summary;
}

}  // namespace samgsr
