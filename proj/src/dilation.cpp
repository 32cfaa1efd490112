#include "dlab/dilation.hpp"

#include <cmath>
#include <limits>

#include "dlab/errors.hpp"
#include "dlab/fit.hpp"

namespace dlab {

namespace {

constexpr long long kMaxTerms = 10'000'000;

}  // namespace

std::vector<double> default_r_grid() { return {1.0 - 1e-1, 1.0 - 1e-2, 1.0 - 1e-3, 1.0 - 1e-4}; }

double dilation_threshold(const ModelPolynomialSpec& spec) {
  return (2.0 * static_cast<double>(spec.n) + 1.0 - static_cast<double>(spec.m)) / 2.0;
}

std::vector<double> model_quotient_coeffs(const ModelPolynomialSpec& spec, double r, int max_k) {
  if (!(r >= 0.0 && r < 1.0)) throw PreconditionError("model_quotient_coeffs requires 0 <= r < 1");
  if (max_k < 0) throw PreconditionError("model_quotient_coeffs requires K >= 0");
  const double lambda = spec.lambda();
  const double rm = std::pow(r, static_cast<double>(spec.m));
  std::vector<double> c(static_cast<std::size_t>(max_k) + 1, 0.0);
  c[0] = 1.0;
  // c_k = c_{k-1}·λ r^m for k >= 2, starting from c_1 = λ(r^m - 1).
  double ck = lambda * (rm - 1.0);
  for (int k = 1; k <= max_k; ++k) {
    c[static_cast<std::size_t>(k)] = ck;
    ck *= lambda * rm;
  }
  return c;
}

double log_diagonal_weight(const ModelPolynomialSpec& spec, double alpha, long long k) {
  const auto n = static_cast<long long>(spec.n);
  const auto m = static_cast<long long>(spec.m);
  const auto ki = static_cast<int>(k);
  return alpha * std::log(static_cast<double>(n + m * k)) + log_factorial(static_cast<int>(n - 1)) +
         static_cast<double>(m) * log_factorial(ki) - log_factorial(static_cast<int>(n - 1 + m * k));
}

double quotient_norm_sq(const ModelPolynomialSpec& spec, double alpha, double r, double tol) {
  if (!(r >= 0.0 && r < 1.0)) throw PreconditionError("quotient_norm_sq requires 0 <= r < 1");
  if (!(tol > 0.0)) throw PreconditionError("quotient_norm_sq requires tol > 0");
  const double m = static_cast<double>(spec.m);
  const double base = std::pow(static_cast<double>(spec.n), alpha);
  const double log_lambda_sq = m * std::log(m);
  if (r == 0.0) return base + std::exp(log_diagonal_weight(spec, alpha, 1) + log_lambda_sq);

  const double log_r = std::log(r);
  const double log_gap_sq = 2.0 * std::log1p(-std::pow(r, m));
  const double geometric = std::pow(r, 2.0 * m);
  double sum = base;
  double carry = 0.0;
  double previous = 0.0;
  for (long long k = 1; k <= kMaxTerms; ++k) {
    const double kd = static_cast<double>(k);
    const double log_term = log_diagonal_weight(spec, alpha, k) + kd * log_lambda_sq +
                            2.0 * m * (kd - 1.0) * log_r + log_gap_sq;
    const double term = std::exp(log_term);
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    if (k >= 2 && previous > 0.0) {
      const double q = std::max(term / previous, geometric);
      if (q < 1.0 && term * q / (1.0 - q) < tol * sum) return sum;
    }
    previous = term;
  }
  throw Error("quotient_norm_sq did not converge within 1e7 terms");
}

QuotientNorm general_quotient_norm_sq(const CoeffSeries& p, double alpha, double r, int degree) {
  if (!p.is_polynomial()) throw PreconditionError("general_quotient_norm_sq requires a polynomial");
  const CoeffSeries quotient = mul(p, reciprocal(dilate(p, r), degree));
  const NormReport report = norm_sq(SpaceParams(p.dim(), alpha), quotient);
  return {report.value, report.last_shell.value_or(0.0)};
}

double fit_dilation_exponent(const std::vector<double>& r_grid, const std::vector<double>& norms) {
  if (r_grid.size() != norms.size()) throw PreconditionError("grid and norms differ in length");
  if (r_grid.size() < 4) throw InsufficientData("dilation fit needs at least 4 radii");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0 && r_grid[i] < 1.0)) throw PreconditionError("radii must lie in (0,1)");
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw PreconditionError("radii must be ascending");
  }
  const double span = std::log10((1.0 - r_grid.front()) / (1.0 - r_grid.back()));
  if (span < 2.0 - 1e-9) throw InsufficientData("1-r must span at least two decades");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    x.push_back(-std::log1p(-r_grid[i]));
    y.push_back(std::log(norms[i]));
  }
  return fit_line(x, y).slope;
}

DilationSweep dilation_sweep(const ModelPolynomialSpec& spec, double alpha,
                             std::vector<double> r_grid) {
  DilationSweep sweep;
  sweep.spec = spec;
  sweep.alpha = alpha;
  sweep.r_grid = std::move(r_grid);
  sweep.norms.resize(sweep.r_grid.size());
  parallel_for(sweep.r_grid.size(), [&](std::size_t i) {
    sweep.norms[i] = quotient_norm_sq(spec, alpha, sweep.r_grid[i]);
  });
  if (sweep.r_grid.size() >= 4) sweep.fitted_exponent = fit_dilation_exponent(sweep.r_grid, sweep.norms);
  return sweep;
}

BoundednessVerdict boundedness_verdict(const DilationSweep& sweep) {
  BoundednessVerdict v;
  v.exponent = fit_dilation_exponent(sweep.r_grid, sweep.norms);
  v.bounded = v.exponent < kBoundedSlope;
  v.note = v.bounded ? "fitted slope below " + std::to_string(kBoundedSlope) +
                           "; norm boundedness only, pointwise convergence is automatic"
                     : "norm grows like (1-r)^{-s} over the grid";
  return v;
}

double locate_dilation_threshold(const ModelPolynomialSpec& spec, double lo, double hi,
                                 const std::vector<double>& r_grid, double tolerance) {
  auto slope = [&](double alpha) { return dilation_sweep(spec, alpha, r_grid).fitted_exponent; };
  if (!(slope(lo) < kBoundedSlope) || !(slope(hi) >= kBoundedSlope)) {
    throw Error("locate_dilation_threshold: slope does not cross the bound inside [lo, hi]");
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) < kBoundedSlope) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dlab
