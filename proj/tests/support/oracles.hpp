#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "samgsr/data_model.hpp"

namespace samgsr::testing {

/// Exhaustive-enumeration p-value of a gene subset's sum of squared SAM
/// statistics. Every way of choosing the positive group is visited as a bit
/// mask; s0 is the median of the positive pooled SDs of all genes.
/// `weights` is empty or one value per dataset gene.
double brute_force_pvalue(const ExpressionDataset& dataset, std::span<const std::string> genes,
                          const std::string& positive_class, std::span<const double> weights = {});

/// Precision-recall area from a direct sweep over every distinct score used
/// as a cut-off (score >= t predicted positive).
double aupr_oracle(std::span<const double> scores, std::span<const std::uint8_t> positive);

/// Spearman correlation from pairwise-count ranks.
double spearman_oracle(std::span<const double> x, std::span<const double> y);

/// Fully sorted linear-interpolation percentile.
double percentile_oracle(std::vector<double> values, double q);

/// P(class 1) = E[sigmoid(b . X)] for X standard normal, by Simpson's rule
/// on the one-dimensional distribution of b . X.
double logistic_marginal(std::span<const double> coefficients, double intercept = 0.0);

}  // namespace samgsr::testing
