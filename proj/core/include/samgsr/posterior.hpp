#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace samgsr {

/// Per-sample class probabilities; row-major, one column per class.
struct PosteriorMatrix {
  std::vector<std::string> classes;
  std::vector<std::string> sample_ids;
  std::vector<double> values;

  std::size_t rows() const noexcept { return sample_ids.size(); }
  std::size_t cols() const noexcept { return classes.size(); }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols(), cols()}; }
  double at(std::size_t i, std::size_t c) const { return values[i * cols() + c]; }

  /// Throws InvalidInput unless every entry is in [0, 1] and rows sum to 1
  /// within `tolerance`.
  void validate(double tolerance = 1e-9) const;

  bool operator==(const PosteriorMatrix&) const = default;
};

/// Four-class posteriors from two independent binary ones: column (i, j) is
/// subtype[i] * stage[j], named "<subtype class>-<stage class>", in
/// subtype-major order. The last column takes 1 minus the others, so each
/// row sums to exactly 1 when added left to right.
PosteriorMatrix composite_four_class(const PosteriorMatrix& subtype, const PosteriorMatrix& stage);

}  // namespace samgsr
