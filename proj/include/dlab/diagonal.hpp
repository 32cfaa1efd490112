#pragma once

#include <cstddef>
#include <vector>

#include "dlab/norms.hpp"
#include "dlab/series.hpp"

namespace dlab {

/// μ(m) = (M_1+...+M_m)^{M_1+...+M_m} / (M_1^{M_1}⋯M_m^{M_m}), evaluated in logs.
double mu_const(const MultiIndex& M, std::size_t m);

/// β(α) = α - n + (m+1)/2.
double beta_of_alpha(double alpha, std::size_t n, std::size_t m);

/// The diagonal subspace generated by u = z_1^{M_1}⋯z_m^{M_m}.
class DiagonalSpec {
 public:
  /// Requires M_i >= 1 for i < m and M_i = 0 for i >= m.
  DiagonalSpec(std::size_t m, MultiIndex M);
  /// M = (1,...,1,0,...,0), the case of the model polynomials (μ = m^m).
  static DiagonalSpec model(std::size_t n, std::size_t m);

  std::size_t n() const { return M_.dim(); }
  std::size_t m() const { return m_; }
  const MultiIndex& M() const { return M_; }
  double mu() const { return mu_; }
  double beta(double alpha) const { return beta_of_alpha(alpha, n(), m_); }

 private:
  std::size_t m_;
  MultiIndex M_;
  double mu_;
};

/// One-variable series Σ a_l w^l measured in d_β with parameter μ.
struct OneVarSeries {
  std::vector<Complex> coeffs;
  double mu = 1.0;
};

/// Σ μ^{-l/2}(l+1)^β |a_l|².
double dbeta_norm_sq(const OneVarSeries& f, double beta);
/// ⟨f, g⟩ in d_β (μ taken from f).
Complex dbeta_inner(const OneVarSeries& f, const OneVarSeries& g, double beta);

/// f(z) = f̃(μ^{1/4} z^M): coefficient μ^{l/4} a_l at l·M.
CoeffSeries lift(const OneVarSeries& f, const DiagonalSpec& spec);
/// Inverse of lift on the diagonal; off-diagonal coefficients are dropped.
OneVarSeries project(const CoeffSeries& r, const DiagonalSpec& spec);

/// t^{1-β} for β < 1, log⁺ t for β = 1. Throws BetaAboveOne for β > 1.
double phi_beta(double t, double beta);

/// ‖lift(f̃)‖²_α / ‖f̃‖²_{d_β(α)}. Throws PreconditionError when f̃ = 0.
double norm_equivalence_probe(const OneVarSeries& f, const DiagonalSpec& spec, double alpha);

}  // namespace dlab
