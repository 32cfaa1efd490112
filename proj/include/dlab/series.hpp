#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlab/multiindex.hpp"

namespace dlab {

using Complex = std::complex<double>;

/// Coefficients below this magnitude are dropped when a series is normalized.
inline constexpr double kDropThreshold = 1e-300;

/// Sparse multivariate power series Σ a_k z^k.
///
/// `trunc_degree` is the largest total degree the coefficients are known to;
/// std::nullopt means the series is an exact polynomial. Operations never
/// extend it: sums and products carry the minimum of their operands'.
class CoeffSeries {
 public:
  using Terms = std::map<MultiIndex, Complex>;

  explicit CoeffSeries(std::size_t dim, std::optional<int> trunc_degree = std::nullopt);
  CoeffSeries(std::size_t dim, Terms terms, std::optional<int> trunc_degree = std::nullopt);

  static CoeffSeries constant(std::size_t dim, Complex value);
  static CoeffSeries monomial(const MultiIndex& k, Complex value = 1.0);

  std::size_t dim() const { return dim_; }
  std::optional<int> trunc_degree() const { return trunc_; }
  bool is_polynomial() const { return !trunc_.has_value(); }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Complex coeff(const MultiIndex& k) const;
  Complex constant_term() const;
  /// Largest total degree among stored terms (-1 for the zero series).
  int max_degree() const;

  CoeffSeries with_trunc(std::optional<int> trunc_degree) const;

 private:
  void normalize();

  std::size_t dim_;
  std::optional<int> trunc_;
  Terms terms_;
};

CoeffSeries add(const CoeffSeries& f, const CoeffSeries& g);
CoeffSeries sub(const CoeffSeries& f, const CoeffSeries& g);
CoeffSeries scale(const CoeffSeries& f, Complex c);
/// Cauchy product truncated at min(trunc(f), trunc(g)).
CoeffSeries mul(const CoeffSeries& f, const CoeffSeries& g);

/// 1/f through total degree D. Throws ZeroConstantTerm when |f(0)| <= 1e-300.
CoeffSeries reciprocal(const CoeffSeries& f, int degree);

/// f_r(z) = f(rz), i.e. a_k -> r^{|k|} a_k. Requires 0 <= r <= 1.
CoeffSeries dilate(const CoeffSeries& f, double r);

/// Model polynomial 1 - m^{m/2} z_1⋯z_m on C^n.
struct ModelPolynomialSpec {
  std::size_t n;
  std::size_t m;

  ModelPolynomialSpec(std::size_t n, std::size_t m);
  /// λ = m^{m/2}.
  double lambda() const;
  /// The exponent (1,...,1,0,...,0) of u = z_1⋯z_m.
  MultiIndex diagonal_unit() const;
  /// A point of the boundary zero set: m^{-1/2}(e^{iθ_1},...,e^{-i(θ_1+...+θ_{m-1})},0,...,0).
  /// `angles` has m-1 entries.
  std::vector<Complex> zero_set_point(const std::vector<double>& angles) const;
};

CoeffSeries model_polynomial(const ModelPolynomialSpec& spec);

/// Σ a_k z^k over stored terms with compensated summation.
Complex evaluate(const CoeffSeries& f, const std::vector<Complex>& z);

}  // namespace dlab
