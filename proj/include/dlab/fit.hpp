#pragma once

#include <cstddef>
#include <span>

namespace dlab {

/// Ordinary least-squares line y ≈ intercept + slope·x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual.
  double residual = 0.0;
  std::size_t points = 0;
};

/// Requires at least two points with distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace dlab
