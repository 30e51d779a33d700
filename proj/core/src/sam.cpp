#include "samgsr/sam.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "samgsr/error.hpp"

namespace samgsr {
namespace {

struct GroupMoments {
  double mean_pos = 0.0;
  double mean_neg = 0.0;
  double pooled = 0.0;
};

GroupMoments group_moments(const double* row, const std::uint8_t* positive, std::size_t n) {
  double sum_pos = 0.0, sum_neg = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (positive[s]) {
      sum_pos += row[s];
      ++n_pos;
    } else {
      sum_neg += row[s];
    }
  }
  const std::size_t n_neg = n - n_pos;
  GroupMoments m;
  m.mean_pos = sum_pos / static_cast<double>(n_pos);
  m.mean_neg = sum_neg / static_cast<double>(n_neg);
  double ss_pos = 0.0, ss_neg = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    if (positive[s]) {
      const double e = row[s] - m.mean_pos;
      ss_pos += e * e;
    } else {
      const double e = row[s] - m.mean_neg;
      ss_neg += e * e;
    }
  }
  m.pooled = std::sqrt((ss_pos + ss_neg) / static_cast<double>(n - 2));
  return m;
}

void check_groups(std::span<const std::uint8_t> positive) {
  const auto n_pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), std::uint8_t{1}));
  if (n_pos < 2 || positive.size() - n_pos < 2) {
    throw InvalidInput("pooled SD needs at least 2 samples in each group");
  }
}

// Type-7 percentile over a scratch buffer that may be reordered.
double percentile_in_place(std::vector<double>& v, double q) {
  const double h = static_cast<double>(v.size() - 1) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
  const double low = v[lo];
  if (lo + 1 >= v.size()) return low;
  const double high = *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(lo) + 1, v.end());
  return low + (h - static_cast<double>(lo)) * (high - low);
}

double s0_from(std::vector<double>& positive_s, const S0Method& method) {
  if (method.kind == S0Method::Kind::fixed) return method.value;
  if (positive_s.empty()) throw InvalidInput("every pooled SD is zero; s0 is undefined (use a fixed s0)");
  return percentile_in_place(positive_s, method.kind == S0Method::Kind::median ? 50.0 : method.value);
}

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string to_string(const S0Method& method) {
  char buffer[64];
  switch (method.kind) {
    case S0Method::Kind::median:
      return "median";
    case S0Method::Kind::fixed:
      std::snprintf(buffer, sizeof buffer, "fixed:%.17g", method.value);
      return buffer;
    case S0Method::Kind::percentile:
      std::snprintf(buffer, sizeof buffer, "percentile:%.17g", method.value);
      return buffer;
  }
  return "median";
}

S0Method parse_s0_method(std::string_view text) {
  if (text == "median") return S0Method::median();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto head = text.substr(0, colon);
    const double value = parse_number(text.substr(colon + 1), "s0 parameter");
    if (head == "fixed") {
      if (!(value > 0.0)) throw ConfigError("fixed s0 must be positive");
      return S0Method::fixed(value);
    }
    if (head == "percentile") {
      if (!(value >= 0.0 && value <= 100.0)) throw ConfigError("s0 percentile must lie in [0, 100]");
      return S0Method::percentile(value);
    }
  }
  throw ConfigError("unknown s0 method '" + std::string(text) + "' (median, fixed:<v>, percentile:<q>)");
}

double percentile(std::span<const double> values, double q) {
  if (values.empty()) throw InvalidInput("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw InvalidInput("percentile must lie in [0, 100]");
  std::vector<double> copy(values.begin(), values.end());
  return percentile_in_place(copy, q);
}

double pooled_sd(std::span<const double> values, std::span<const std::uint8_t> positive) {
  if (values.size() != positive.size()) throw InvalidInput("pooled_sd: group mask length mismatch");
  check_groups(positive);
  return group_moments(values.data(), positive.data(), values.size()).pooled;
}

double pooled_sd(const ExpressionDataset& dataset, const BinaryDesign& design, std::size_t gene) {
  return pooled_sd(dataset.row(gene), design.positive);
}

double compute_s0(std::span<const double> all_s, const S0Method& method) {
  if (all_s.empty()) throw InvalidInput("compute_s0: no pooled SDs given");
  if (method.kind == S0Method::Kind::fixed) {
    if (!(method.value > 0.0)) throw InvalidInput("fixed s0 must be positive");
    return method.value;
  }
  std::vector<double> positive;
  positive.reserve(all_s.size());
  for (const double s : all_s) {
    if (s > 0.0) positive.push_back(s);
  }
  return s0_from(positive, method);
}

std::optional<std::size_t> SamStatistics::index_of(std::string_view gene_id) const {
  const auto it = std::find(gene_ids.begin(), gene_ids.end(), gene_id);
  if (it == gene_ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - gene_ids.begin());
}

SamKernel::SamKernel(const ExpressionDataset& dataset)
    : values_(dataset.values().data()), genes_(dataset.gene_count()), samples_(dataset.sample_count()) {}

double SamKernel::evaluate(std::span<const std::uint8_t> positive, const S0Method& method,
                           std::span<const std::size_t> genes, std::span<double> d_out, Workspace& ws) const {
  ws.mean_pos.resize(genes_);
  ws.mean_neg.resize(genes_);
  ws.s.resize(genes_);
  ws.scratch.clear();
  for (std::size_t g = 0; g < genes_; ++g) {
    const auto m = group_moments(values_ + g * samples_, positive.data(), samples_);
    ws.mean_pos[g] = m.mean_pos;
    ws.mean_neg[g] = m.mean_neg;
    ws.s[g] = m.pooled;
    if (m.pooled > 0.0) ws.scratch.push_back(m.pooled);
  }
  const double s0 = s0_from(ws.scratch, method);
  for (std::size_t k = 0; k < genes.size(); ++k) {
    const std::size_t g = genes[k];
    d_out[k] = (ws.mean_pos[g] - ws.mean_neg[g]) / (ws.s[g] + s0);
  }
  return s0;
}

SamStatistics sam_statistic(const ExpressionDataset& dataset, const BinaryDesign& design, const S0Method& method) {
  if (design.positive.size() != dataset.sample_count()) throw InvalidInput("design does not match dataset");
  check_groups(design.positive);
  if (method.kind == S0Method::Kind::fixed && !(method.value > 0.0)) throw InvalidInput("fixed s0 must be positive");
  const SamKernel kernel(dataset);
  SamKernel::Workspace ws;
  std::vector<std::size_t> all(dataset.gene_count());
  for (std::size_t g = 0; g < all.size(); ++g) all[g] = g;

  SamStatistics stats;
  stats.gene_ids = dataset.gene_ids();
  stats.d.resize(all.size());
  stats.s0 = kernel.evaluate(design.positive, method, all, stats.d, ws);
  stats.s = ws.s;
  return stats;
}

SamStatistics weighted_sam_statistic(const SamStatistics& stats, const WeightVector& weights) {
  std::unordered_map<std::string_view, double> lookup;
  for (std::size_t i = 0; i < weights.gene_ids.size(); ++i) lookup.emplace(weights.gene_ids[i], weights.values[i]);

  SamStatistics out = stats;
  WeightVector used;
  used.gene_ids = stats.gene_ids;
  used.values.reserve(stats.gene_ids.size());
  for (std::size_t i = 0; i < stats.gene_ids.size(); ++i) {
    const auto it = lookup.find(stats.gene_ids[i]);
    if (it == lookup.end()) throw InvalidInput("no weight for gene '" + stats.gene_ids[i] + "'");
    out.d[i] = it->second * stats.d[i];
    used.values.push_back(it->second);
  }
  out.weighted = true;
  out.weights_used = std::move(used);
  return out;
}

SetScore samgs_score(const SamStatistics& stats, const GeneSet& set) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < stats.gene_ids.size(); ++i) index.emplace(stats.gene_ids[i], i);
  double score = 0.0;
  for (auto it = set.genes.rbegin(); it != set.genes.rend(); ++it) {
    const auto found = index.find(*it);
    if (found == index.end()) throw InvalidInput("gene '" + *it + "' of set '" + set.name + "' has no statistic");
    const double d = stats.d[found->second];
    score += d * d;
  }
  return {set.name, score, set.genes.size()};
}

}  // namespace samgsr
