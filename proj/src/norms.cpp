#include "dlab/norms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dlab/errors.hpp"

namespace dlab {

namespace {

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

// Sign of Γ(x) for x not a pole.
double gamma_sign(double x) {
  if (x > 0.0) return 1.0;
  return static_cast<long long>(std::floor(x)) % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

SpaceParams::SpaceParams(std::size_t n_, double alpha_) : n(n_), alpha(alpha_) {
  if (n < 1 || n > kMaxDim) throw PreconditionError("space dimension out of range");
  if (!std::isfinite(alpha)) throw PreconditionError("alpha must be finite");
}

Weight::Weight(SpaceParams params) : params_(params) {}

void Weight::reserve(int max_degree) const {
  const int n = static_cast<int>(params_.n);
  for (int d = static_cast<int>(shell_.size()); d <= max_degree; ++d) {
    shell_.push_back(params_.alpha * std::log(static_cast<double>(n + d)) +
                     log_factorial(n - 1) - log_factorial(n - 1 + d));
  }
}

double Weight::shell_log(int degree) const {
  if (degree >= static_cast<int>(shell_.size())) reserve(degree);
  return shell_[static_cast<std::size_t>(degree)];
}

double Weight::log(const MultiIndex& k) const {
  if (k.dim() != params_.n) throw DimensionMismatch("weight: index length differs from n");
  return shell_log(k.degree()) + log_factorial(k);
}

double Weight::operator()(const MultiIndex& k) const { return std::exp(log(k)); }

double weight(const SpaceParams& params, const MultiIndex& k) { return Weight(params)(k); }

NormReport norm_sq(const SpaceParams& params, const CoeffSeries& f) {
  if (f.dim() != params.n) throw DimensionMismatch("norm_sq: series dim differs from n");
  const Weight w(params);
  Kahan total;
  Kahan shell;
  int shell_degree = -1;
  for (const auto& [k, c] : f.terms()) {
    if (k.degree() != shell_degree) {
      shell = {};
      shell_degree = k.degree();
    }
    const double term = w(k) * std::norm(c);
    total.add(term);
    shell.add(term);
  }
  NormReport report;
  report.value = total.sum;
  if (!f.is_polynomial()) report.last_shell = shell_degree == *f.trunc_degree() ? shell.sum : 0.0;
  return report;
}

Complex inner(const SpaceParams& params, const CoeffSeries& f, const CoeffSeries& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("inner: series dimensions differ");
  if (f.dim() != params.n) throw DimensionMismatch("inner: series dim differs from n");
  const Weight w(params);
  Kahan re, im;
  // Both maps iterate in the same order; merge-join on the common support.
  auto a = f.terms().begin();
  auto b = g.terms().begin();
  while (a != f.terms().end() && b != g.terms().end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      const Complex term = w(a->first) * a->second * std::conj(b->second);
      re.add(term.real());
      im.add(term.imag());
      ++a;
      ++b;
    }
  }
  return {re.sum, im.sum};
}

CoeffSeries radial_derivative(const CoeffSeries& f) {
  CoeffSeries::Terms terms;
  for (const auto& [k, c] : f.terms()) terms.emplace(k, c * static_cast<double>(k.degree()));
  return CoeffSeries(f.dim(), std::move(terms), f.trunc_degree());
}

std::pair<double, double> relation_check(const SpaceParams& params, const CoeffSeries& f, int q) {
  if (q < 1) throw PreconditionError("relation_check requires q >= 1");
  CoeffSeries image = f;
  const double n = static_cast<double>(params.n);
  for (int i = 0; i < q; ++i) image = add(scale(image, n), radial_derivative(image));
  const SpaceParams lowered(params.n, params.alpha - 2.0 * q);
  return {norm_sq(lowered, image).value, norm_sq(params, f).value};
}

double fractional_coeff(double gamma, double t, int k_deg, std::size_t n) {
  if (k_deg < 0) throw PreconditionError("fractional_coeff: negative degree");
  const double nd = static_cast<double>(n);
  const double a = nd + 1.0 + gamma;
  const double b = nd + 1.0 + gamma + t;
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
    throw PoleError("fractional_coeff: n+gamma or n+gamma+t is a negative integer");
  }
  if (t == 0.0 || k_deg == 0) return 1.0;
  const double k = static_cast<double>(k_deg);
  const double log_mag =
      std::lgamma(a) + std::lgamma(b + k) - std::lgamma(b) - std::lgamma(a + k);
  const double sign = gamma_sign(a) * gamma_sign(b + k) * gamma_sign(b) * gamma_sign(a + k);
  return sign * std::exp(log_mag);
}

CoeffSeries apply_fractional(double gamma, double t, const CoeffSeries& f) {
  CoeffSeries::Terms terms;
  for (const auto& [k, c] : f.terms()) {
    terms.emplace(k, c * fractional_coeff(gamma, t, k.degree(), f.dim()));
  }
  return CoeffSeries(f.dim(), std::move(terms), f.trunc_degree());
}

MeanEstimate mc_integral_norm(const SpaceParams& params, const CoeffSeries& f,
                              std::size_t samples, std::uint64_t seed) {
  if (!(params.alpha > -1.0 && params.alpha < 1.0)) {
    throw AlphaOutOfRange("mc_integral_norm requires alpha in (-1, 1), got " +
                          std::to_string(params.alpha));
  }
  if (!f.is_polynomial()) throw PreconditionError("mc_integral_norm requires a polynomial");
  if (f.dim() != params.n) throw DimensionMismatch("mc_integral_norm: series dim differs from n");
  const std::size_t n = params.n;
  std::vector<CoeffSeries> gradient;
  for (std::size_t i = 0; i < n; ++i) {
    CoeffSeries::Terms terms;
    for (const auto& [k, c] : f.terms()) {
      if (k[i] == 0) continue;
      MultiIndex km = k;
      km.set(i, k[i] - 1);
      terms.emplace(km, c * static_cast<double>(k[i]));
    }
    gradient.emplace_back(n, std::move(terms));
  }
  const double alpha = params.alpha;
  return mc_mean(
      samples, seed, [n](Rng& rng) { return sample_ball(n, rng); },
      [&](const Point& z) {
        double grad_sq = 0.0;
        Complex radial{};
        for (std::size_t i = 0; i < n; ++i) {
          const Complex g = evaluate(gradient[i], z);
          grad_sq += std::norm(g);
          radial += z[i] * g;
        }
        const double defect = 1.0 - dlab::norm_sq(z);
        return (grad_sq - std::norm(radial)) * std::pow(defect, -alpha);
      });
}

MeanEstimate mc_sphere_norm_sq(const CoeffSeries& f, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = f.dim();
  return mc_mean(
      samples, seed, [n](Rng& rng) { return sample_sphere(n, rng); },
      [&](const Point& z) { return std::norm(evaluate(f, z)); });
}

MeanEstimate mc_ball_norm_sq(const CoeffSeries& f, std::size_t samples, std::uint64_t seed) {
  const std::size_t n = f.dim();
  return mc_mean(
      samples, seed, [n](Rng& rng) { return sample_ball(n, rng); },
      [&](const Point& z) { return std::norm(evaluate(f, z)); });
}

}  // namespace dlab
