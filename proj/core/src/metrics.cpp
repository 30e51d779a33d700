#include "samgsr/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "samgsr/error.hpp"

namespace samgsr {
namespace {

void check_truth(const PosteriorMatrix& posteriors, std::span<const std::size_t> truth) {
  if (truth.size() != posteriors.rows()) {
    throw InvalidInput("truth has " + std::to_string(truth.size()) + " entries for " +
                       std::to_string(posteriors.rows()) + " samples");
  }
  if (posteriors.rows() == 0) throw InvalidInput("no samples to evaluate");
  for (const auto t : truth) {
    if (t >= posteriors.cols()) throw InvalidInput("truth index outside the class list");
  }
}

}  // namespace

std::vector<std::size_t> truth_indices(const PosteriorMatrix& posteriors, std::span<const std::string> labels) {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& label : labels) {
    const auto it = std::find(posteriors.classes.begin(), posteriors.classes.end(), label);
    if (it == posteriors.classes.end()) throw InvalidInput("label '" + label + "' is not a posterior class");
    out.push_back(static_cast<std::size_t>(it - posteriors.classes.begin()));
  }
  return out;
}

double error_rate(const PosteriorMatrix& posteriors, std::span<const std::size_t> truth) {
  check_truth(posteriors, truth);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < posteriors.rows(); ++i) {
    const auto row = posteriors.row(i);
    const auto arg = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    if (arg != truth[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(posteriors.rows());
}

double generalized_brier(const PosteriorMatrix& posteriors, std::span<const std::size_t> truth) {
  check_truth(posteriors, truth);
  double total = 0.0;
  for (std::size_t i = 0; i < posteriors.rows(); ++i) {
    for (std::size_t c = 0; c < posteriors.cols(); ++c) {
      const double diff = posteriors.at(i, c) - (c == truth[i] ? 1.0 : 0.0);
      total += diff * diff;
    }
  }
  return total / (2.0 * static_cast<double>(posteriors.rows()));
}

double belief_confusion(const PosteriorMatrix& posteriors, std::span<const std::size_t> truth,
                        std::vector<std::string>* warnings) {
  check_truth(posteriors, truth);
  std::vector<double> sum(posteriors.cols(), 0.0);
  std::vector<std::size_t> count(posteriors.cols(), 0);
  for (std::size_t i = 0; i < posteriors.rows(); ++i) {
    sum[truth[i]] += posteriors.at(i, truth[i]);
    ++count[truth[i]];
  }
  double total = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < posteriors.cols(); ++c) {
    if (count[c] == 0) {
      if (warnings) warnings->push_back("class '" + posteriors.classes[c] + "' has no samples; left out of BCM");
      continue;
    }
    total += sum[c] / static_cast<double>(count[c]);
    ++present;
  }
  return total / static_cast<double>(present);
}

double aupr_scores(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  if (scores.size() != positive.size()) throw InvalidInput("score and truth lengths differ");
  const auto total_pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), std::uint8_t{1}));
  if (total_pos == 0) throw InvalidInput("AUPR is undefined without positive samples");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double area = 0.0, previous_recall = 0.0;
  std::size_t tp = 0, seen = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      tp += positive[order[j]] ? 1 : 0;
      ++j;
    }
    seen = j;
    const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    area += (recall - previous_recall) * precision;
    previous_recall = recall;
    i = j;
  }
  return area;
}

double aupr(const PosteriorMatrix& posteriors, std::span<const std::size_t> truth, std::vector<std::string>* warnings) {
  check_truth(posteriors, truth);
  const std::size_t n = posteriors.rows();
  auto one_vs_rest = [&](std::size_t c) {
    std::vector<double> scores(n);
    std::vector<std::uint8_t> positive(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = posteriors.at(i, c);
      positive[i] = truth[i] == c ? 1 : 0;
    }
    return aupr_scores(scores, positive);
  };
  if (posteriors.cols() == 2) return one_vs_rest(1);

  double total = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < posteriors.cols(); ++c) {
    if (std::find(truth.begin(), truth.end(), c) == truth.end()) {
      if (warnings) warnings->push_back("class '" + posteriors.classes[c] + "' has no samples; left out of AUPR");
      continue;
    }
    total += one_vs_rest(c);
    ++present;
  }
  return total / static_cast<double>(present);
}

double rand_index(std::span<const std::vector<std::string>> lists) {
  const std::size_t k = lists.size();
  if (k < 2) throw InvalidInput("rand index needs at least 2 lists");
  std::vector<std::set<std::string>> sets;
  sets.reserve(k);
  for (const auto& list : lists) sets.emplace_back(list.begin(), list.end());
  double total = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (sets[a].empty() && sets[b].empty()) {
        total += 1.0;
        continue;
      }
      std::size_t common = 0;
      for (const auto& g : sets[a]) common += sets[b].count(g);
      const std::size_t uni = sets[a].size() + sets[b].size() - common;
      total += static_cast<double>(common) / static_cast<double>(uni);
    }
  }
  return 2.0 * total / (static_cast<double>(k) * static_cast<double>(k - 1));
}

EvalReport evaluate(const PosteriorMatrix& posteriors, std::span<const std::string> labels) {
  posteriors.validate();
  const auto truth = truth_indices(posteriors, labels);
  EvalReport report;
  report.error_rate = error_rate(posteriors, truth);
  report.gbs = generalized_brier(posteriors, truth);
  report.bcm = belief_confusion(posteriors, truth, &report.warnings);
  report.aupr = aupr(posteriors, truth, &report.warnings);
  report.n_samples = posteriors.rows();
  report.classes = posteriors.classes;
  return report;
}

StabilityReport stability(std::span<const std::vector<std::string>> gene_lists,
                          std::span<const std::vector<std::string>> pathway_lists) {
  if (gene_lists.size() != pathway_lists.size()) throw InvalidInput("gene and pathway list counts differ");
  StabilityReport report;
  report.k = gene_lists.size();
  report.rand_gene = rand_index(gene_lists);
  report.rand_pathway = rand_index(pathway_lists);
  return report;
}

}  // namespace samgsr
