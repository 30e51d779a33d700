#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "samgsr/posterior.hpp"

namespace samgsr {

/// Column index of each label in `posteriors.classes`; throws on an unknown label.
std::vector<std::size_t> truth_indices(const PosteriorMatrix& posteriors, std::span<const std::string> labels);

/// Fraction of samples whose argmax column differs from the truth. Argmax
/// ties go to the earlier column.
double error_rate(const PosteriorMatrix& posteriors, std::span<const std::size_t> truth);

/// (1 / 2N) sum_i sum_c (p_ic - [c == truth_i])^2.
double generalized_brier(const PosteriorMatrix& posteriors, std::span<const std::size_t> truth);

/// Macro average over classes of the mean probability given to the true
/// class. Classes without samples are skipped and reported in `warnings`.
double belief_confusion(const PosteriorMatrix& posteriors, std::span<const std::size_t> truth,
                        std::vector<std::string>* warnings = nullptr);

/// Area under the precision-recall step curve for `scores` ranked high to
/// low, tied scores forming a single threshold. Throws without positives.
double aupr_scores(std::span<const double> scores, std::span<const std::uint8_t> positive);

/// Binary posteriors: column 1 is the positive class. More columns: macro
/// one-vs-rest average over classes that occur in the truth.
double aupr(const PosteriorMatrix& posteriors, std::span<const std::size_t> truth,
            std::vector<std::string>* warnings = nullptr);

/// Mean pairwise Jaccard similarity of k >= 2 lists, treated as sets. Two
/// empty lists count as identical, one empty list as disjoint.
double rand_index(std::span<const std::vector<std::string>> lists);

struct EvalReport {
  double error_rate = 0.0;
  double gbs = 0.0;
  double bcm = 0.0;
  double aupr = 0.0;
  std::size_t n_samples = 0;
  std::vector<std::string> classes;
  std::vector<std::string> warnings;

  bool operator==(const EvalReport&) const = default;
};

EvalReport evaluate(const PosteriorMatrix& posteriors, std::span<const std::string> labels);

struct StabilityReport {
  double rand_gene = 0.0;
  double rand_pathway = 0.0;
  std::size_t k = 0;

  bool operator==(const StabilityReport&) const = default;
};

StabilityReport stability(std::span<const std::vector<std::string>> gene_lists,
                          std::span<const std::vector<std::string>> pathway_lists);

}  // namespace samgsr
