#include "samgsr/posterior.hpp"

#include <cmath>

#include "samgsr/error.hpp"

namespace samgsr {

void PosteriorMatrix::validate(double tolerance) const {
  if (classes.empty()) throw InvalidInput("posterior matrix has no classes");
  if (values.size() != rows() * cols()) {
    throw InvalidInput("posterior matrix has " + std::to_string(values.size()) + " entries, expected " +
                       std::to_string(rows() * cols()));
  }
  for (std::size_t i = 0; i < rows(); ++i) {
    double sum = 0.0;
    for (const double p : row(i)) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidInput("posterior for sample '" + sample_ids[i] + "' has an entry outside [0, 1]");
      }
      sum += p;
    }
    if (std::fabs(sum - 1.0) > tolerance) {
      throw InvalidInput("posterior row for sample '" + sample_ids[i] + "' sums to " + std::to_string(sum));
    }
  }
}

PosteriorMatrix composite_four_class(const PosteriorMatrix& subtype, const PosteriorMatrix& stage) {
  if (subtype.cols() != 2 || stage.cols() != 2) throw InvalidInput("composite posteriors need two binary inputs");
  if (subtype.sample_ids != stage.sample_ids) throw InvalidInput("subtype and stage posteriors cover different samples");
  PosteriorMatrix out;
  out.sample_ids = subtype.sample_ids;
  for (const auto& a : subtype.classes) {
    for (const auto& b : stage.classes) out.classes.push_back(a + "-" + b);
  }
  out.values.reserve(4 * out.rows());
  for (std::size_t i = 0; i < out.rows(); ++i) {
    const double p00 = subtype.at(i, 0) * stage.at(i, 0);
    const double p01 = subtype.at(i, 0) * stage.at(i, 1);
    const double p10 = subtype.at(i, 1) * stage.at(i, 0);
    double p11 = 1.0 - ((p00 + p01) + p10);
    if (p11 < 0.0) p11 = 0.0;
    out.values.insert(out.values.end(), {p00, p01, p10, p11});
  }
  return out;
}

}  // namespace samgsr
