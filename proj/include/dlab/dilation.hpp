#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlab/norms.hpp"
#include "dlab/series.hpp"

namespace dlab {

/// Default radii 1 - 10^{-1}, ..., 1 - 10^{-4}.
std::vector<double> default_r_grid();

/// α₀ = (2n+1-m)/2, the boundedness threshold of ‖p/p_r‖_α for the model polynomial.
double dilation_threshold(const ModelPolynomialSpec& spec);

/// Coefficients c_0..c_K of p/p_r in powers of u = z_1⋯z_m:
/// c_0 = 1, c_k = λ^k r^{m(k-1)} (r^m - 1).
std::vector<double> model_quotient_coeffs(const ModelPolynomialSpec& spec, double r, int max_k);

/// Weight of the diagonal index k·(1,...,1,0,...,0): (n+mk)^α (n-1)!(k!)^m/(n-1+mk)!, in logs.
double log_diagonal_weight(const ModelPolynomialSpec& spec, double alpha, long long k);

/// ‖p/p_r‖²_α from the exact diagonal series, summed until the geometric tail
/// bound drops below tol·partial_sum. Requires 0 <= r < 1.
double quotient_norm_sq(const ModelPolynomialSpec& spec, double alpha, double r,
                        double tol = 1e-12);

struct QuotientNorm {
  double value = 0.0;
  /// Contribution of the last degree shell.
  double tail_indicator = 0.0;
};

/// norm_sq of p · reciprocal(p_r, D) for a polynomial p with p(0) != 0.
QuotientNorm general_quotient_norm_sq(const CoeffSeries& p, double alpha, double r, int degree);

struct DilationSweep {
  ModelPolynomialSpec spec{1, 1};
  double alpha = 0.0;
  std::vector<double> r_grid;
  std::vector<double> norms;
  /// Slope of log norm² against -log(1-r).
  double fitted_exponent = 0.0;
};

DilationSweep dilation_sweep(const ModelPolynomialSpec& spec, double alpha,
                             std::vector<double> r_grid = default_r_grid());

/// Slope of log norms against -log(1-r). Needs >= 4 strictly ascending radii
/// in (0,1) whose 1-r spans at least two decades.
double fit_dilation_exponent(const std::vector<double>& r_grid, const std::vector<double>& norms);

/// Slopes below this count as bounded.
inline constexpr double kBoundedSlope = 0.15;

struct BoundednessVerdict {
  bool bounded = false;
  double exponent = 0.0;
  std::string note;
};

BoundednessVerdict boundedness_verdict(const DilationSweep& sweep);

/// Bisection in α for the point where the fitted sweep slope crosses
/// kBoundedSlope, searched in [lo, hi].
double locate_dilation_threshold(const ModelPolynomialSpec& spec, double lo, double hi,
                                 const std::vector<double>& r_grid = default_r_grid(),
                                 double tolerance = 1e-3);

}  // namespace dlab
