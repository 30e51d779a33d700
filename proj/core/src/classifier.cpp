#include "samgsr/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "samgsr/error.hpp"

namespace samgsr {
namespace {

double sigmoid_positive(double z) {
  // 1 / (1 + exp(z)) without overflow.
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

struct Design {
  std::vector<double> x;  // row-major n x p
  std::vector<double> y;  // +1 / -1
  std::size_t n = 0;
  std::size_t p = 0;
};

Design gather(const ExpressionDataset& dataset, std::span<const std::string> genes, const BinaryDesign& binary) {
  Design d;
  d.n = dataset.sample_count();
  d.p = genes.size();
  d.x.resize(d.n * d.p);
  for (std::size_t j = 0; j < d.p; ++j) {
    const auto g = dataset.gene_index(genes[j]);
    if (!g) throw InvalidInput("signature gene '" + genes[j] + "' is missing from the expression data");
    const auto row = dataset.row(*g);
    for (std::size_t i = 0; i < d.n; ++i) d.x[i * d.p + j] = row[i];
  }
  d.y.resize(d.n);
  for (std::size_t i = 0; i < d.n; ++i) d.y[i] = binary.positive[i] ? 1.0 : -1.0;
  return d;
}

// Largest eigenvalue of Z^T Z for Z = [X 1], by power iteration from the
// all-ones vector.
double gram_spectral_estimate(const Design& d) {
  const std::size_t q = d.p + 1;
  std::vector<double> v(q, 1.0 / std::sqrt(static_cast<double>(q)));
  std::vector<double> zv(d.n), next(q);
  double lambda = 0.0;
  for (int it = 0; it < 100; ++it) {
    for (std::size_t i = 0; i < d.n; ++i) {
      double s = v[d.p];
      for (std::size_t j = 0; j < d.p; ++j) s += d.x[i * d.p + j] * v[j];
      zv[i] = s;
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < d.n; ++i) {
      for (std::size_t j = 0; j < d.p; ++j) next[j] += d.x[i * d.p + j] * zv[i];
      next[d.p] += zv[i];
    }
    const double norm = std::sqrt(std::inner_product(next.begin(), next.end(), next.begin(), 0.0));
    if (norm == 0.0) return 0.0;
    lambda = norm;
    for (std::size_t j = 0; j < q; ++j) v[j] = next[j] / norm;
  }
  return lambda;
}

struct PlattFit {
  double slope = -1.0;
  double offset = 0.0;
};

// Newton's method with backtracking on the regularized-target sigmoid
// likelihood, started from slope -1 and offset 0.
PlattFit fit_sigmoid(std::span<const double> margin, std::span<const double> y) {
  double n_pos = 0.0, n_neg = 0.0;
  for (const double label : y) (label > 0 ? n_pos : n_neg) += 1.0;
  const double hi = (n_pos + 1.0) / (n_pos + 2.0);
  const double lo = 1.0 / (n_neg + 2.0);
  std::vector<double> target(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) target[i] = y[i] > 0 ? hi : lo;

  auto objective = [&](double a, double b) {
    double f = 0.0;
    for (std::size_t i = 0; i < margin.size(); ++i) {
      const double z = margin[i] * a + b;
      f += z >= 0.0 ? target[i] * z + std::log1p(std::exp(-z)) : (target[i] - 1.0) * z + std::log1p(std::exp(z));
    }
    return f;
  };

  constexpr int kMaxIterations = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kRidge = 1e-12;
  double a = -1.0, b = 0.0;
  double fval = objective(a, b);
  for (int it = 0; it < kMaxIterations; ++it) {
    double h11 = kRidge, h22 = kRidge, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < margin.size(); ++i) {
      const double z = margin[i] * a + b;
      const double p = sigmoid_positive(z);
      const double q = 1.0 - p;
      const double d2 = p * q;
      h11 += margin[i] * margin[i] * d2;
      h22 += d2;
      h21 += margin[i] * d2;
      const double d1 = target[i] - p;
      g1 += margin[i] * d1;
      g2 += d1;
    }
    if (std::fabs(g1) < 1e-5 && std::fabs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= kMinStep) {
      const double na = a + step * da, nb = b + step * db;
      const double nf = objective(na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < kMinStep) break;
  }
  if (!(a <= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    // Margins carry no usable ordering; fall back to the smoothed prevalence.
    a = 0.0;
    b = std::log((n_neg + 1.0) / (n_pos + 1.0));
  }
  return {a, b};
}

}  // namespace

double LinearClassifier::probability(double margin) const {
  return sigmoid_positive(calibration_slope * margin + calibration_offset);
}

LinearClassifier fit_classifier(const ExpressionDataset& dataset, std::span<const std::string> genes,
                                std::string_view positive_class, const ClassifierOptions& options) {
  if (genes.empty()) throw InvalidInput("cannot fit a classifier on an empty signature");
  if (!(options.lambda >= 0.0)) throw ConfigError("classifier lambda must be non-negative");
  const BinaryDesign binary = binary_design(dataset, positive_class);
  const Design d = gather(dataset, genes, binary);
  const double n = static_cast<double>(d.n);

  const double frobenius = std::inner_product(d.x.begin(), d.x.end(), d.x.begin(), 0.0) + n;
  const double spectral = gram_spectral_estimate(d);
  const double curvature = std::min(frobenius, 1.1 * spectral);
  const double lipschitz = 2.0 / n * curvature + 2.0 * options.lambda;
  const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  std::vector<double> w(d.p, 0.0), grad(d.p), residual(d.n);
  double b = 0.0;
  std::size_t it = 0;
  for (; it < options.max_iterations; ++it) {
    for (std::size_t i = 0; i < d.n; ++i) {
      double m = b;
      for (std::size_t j = 0; j < d.p; ++j) m += d.x[i * d.p + j] * w[j];
      const double slack = 1.0 - d.y[i] * m;
      residual[i] = slack > 0.0 ? -2.0 * d.y[i] * slack / n : 0.0;
    }
    for (std::size_t j = 0; j < d.p; ++j) grad[j] = 2.0 * options.lambda * w[j];
    double grad_b = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) {
      if (residual[i] == 0.0) continue;
      for (std::size_t j = 0; j < d.p; ++j) grad[j] += d.x[i * d.p + j] * residual[i];
      grad_b += residual[i];
    }
    double largest = std::fabs(grad_b);
    for (const double g : grad) largest = std::max(largest, std::fabs(g));
    if (largest < options.gradient_tolerance) break;
    for (std::size_t j = 0; j < d.p; ++j) w[j] -= step * grad[j];
    b -= step * grad_b;
  }

  LinearClassifier model;
  model.genes.assign(genes.begin(), genes.end());
  model.coefficients = w;
  model.intercept = b;
  model.negative_class = binary.negative_class;
  model.positive_class = binary.positive_class;
  model.iterations = it;

  std::vector<double> m(d.n);
  for (std::size_t i = 0; i < d.n; ++i) {
    double s = b;
    for (std::size_t j = 0; j < d.p; ++j) s += d.x[i * d.p + j] * w[j];
    m[i] = s;
  }
  const PlattFit platt = fit_sigmoid(m, d.y);
  model.calibration_slope = platt.slope;
  model.calibration_offset = platt.offset;
  return model;
}

LinearClassifier constant_classifier(const ExpressionDataset& dataset, std::string_view positive_class) {
  const BinaryDesign binary = binary_design(dataset, positive_class);
  LinearClassifier model;
  model.negative_class = binary.negative_class;
  model.positive_class = binary.positive_class;
  model.calibration_slope = 0.0;
  model.calibration_offset =
      std::log(static_cast<double>(binary.negative_count) / static_cast<double>(binary.positive_count));
  return model;
}

std::vector<double> margins(const LinearClassifier& model, const ExpressionDataset& dataset) {
  std::vector<double> out(dataset.sample_count(), model.intercept);
  for (std::size_t j = 0; j < model.genes.size(); ++j) {
    const auto g = dataset.gene_index(model.genes[j]);
    if (!g) throw InvalidInput("model gene '" + model.genes[j] + "' is missing from the expression data");
    const auto row = dataset.row(*g);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += model.coefficients[j] * row[i];
  }
  return out;
}

PosteriorMatrix predict(const LinearClassifier& model, const ExpressionDataset& dataset) {
  const auto m = margins(model, dataset);
  PosteriorMatrix out;
  out.classes = {model.negative_class, model.positive_class};
  out.sample_ids = dataset.sample_ids();
  out.values.reserve(2 * m.size());
  for (const double margin : m) {
    const double p = model.probability(margin);
    out.values.push_back(1.0 - p);
    out.values.push_back(p);
  }
  return out;
}

}  // namespace samgsr
