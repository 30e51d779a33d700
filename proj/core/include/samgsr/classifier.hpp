#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "samgsr/data_model.hpp"
#include "samgsr/posterior.hpp"

namespace samgsr {

/// Regularized squared-hinge objective
///   (1/n) sum_i max(0, 1 - y_i (w.x_i + b))^2 + lambda |w|^2,
/// minimized by full-batch gradient descent with a fixed 1/L step.
struct ClassifierOptions {
  double lambda = 1e-2;
  std::size_t max_iterations = 2000;
  double gradient_tolerance = 1e-8;

  bool operator==(const ClassifierOptions&) const = default;
};

/// Linear margin model plus a sigmoid map from margin to probability:
/// P(positive | m) = 1 / (1 + exp(slope * m + offset)).
struct LinearClassifier {
  std::vector<std::string> genes;
  std::vector<double> coefficients;
  double intercept = 0.0;
  double calibration_slope = -1.0;
  double calibration_offset = 0.0;
  std::string negative_class;
  std::string positive_class;
  std::size_t iterations = 0;

  double probability(double margin) const;
  bool operator==(const LinearClassifier&) const = default;
};

/// Fits on the signature genes. Labels must have exactly two levels.
LinearClassifier fit_classifier(const ExpressionDataset& dataset, std::span<const std::string> genes,
                                std::string_view positive_class = {}, const ClassifierOptions& options = {});

/// Gene-free model predicting the training prevalence for every sample, so
/// its argmax is the majority class. Used when a signature is empty.
LinearClassifier constant_classifier(const ExpressionDataset& dataset, std::string_view positive_class = {});

std::vector<double> margins(const LinearClassifier& model, const ExpressionDataset& dataset);

/// Two columns, (negative_class, positive_class).
PosteriorMatrix predict(const LinearClassifier& model, const ExpressionDataset& dataset);

}  // namespace samgsr
