#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dlab/monte_carlo.hpp"
#include "dlab/series.hpp"

namespace dlab {

/// Identifies D_α(B_n). α = 0 is the Hardy space, α = -1 Bergman, α = n Dirichlet.
struct SpaceParams {
  std::size_t n = 1;
  double alpha = 0.0;

  SpaceParams() = default;
  SpaceParams(std::size_t n, double alpha);
};

/// The diagonal weight (n+|k|)^α (n-1)! k! / (n-1+|k|)! of D_α(B_n).
///
/// The degree-dependent part is cached per shell; the table grows on demand,
/// so a Weight instance is not safe for concurrent first use of a new degree.
/// Call reserve() before sharing it across threads.
class Weight {
 public:
  explicit Weight(SpaceParams params);

  const SpaceParams& params() const { return params_; }
  double log(const MultiIndex& k) const;
  double operator()(const MultiIndex& k) const;
  void reserve(int max_degree) const;

 private:
  double shell_log(int degree) const;

  SpaceParams params_;
  mutable std::vector<double> shell_;
};

double weight(const SpaceParams& params, const MultiIndex& k);

struct NormReport {
  double value = 0.0;
  /// Contribution of the shell at the truncation degree, reported for truncated
  /// series as a heuristic tail indicator.
  std::optional<double> last_shell;
};

/// Σ weight(k)|a_k|², summed in ascending degree with compensation.
NormReport norm_sq(const SpaceParams& params, const CoeffSeries& f);
/// Σ weight(k) a_k conj(b_k).
Complex inner(const SpaceParams& params, const CoeffSeries& f, const CoeffSeries& g);

/// R f = Σ z_i ∂_i f, i.e. a_k -> |k| a_k.
CoeffSeries radial_derivative(const CoeffSeries& f);

/// (norm_sq at α-2q of (nI+R)^q f, norm_sq at α of f); equal for every q.
std::pair<double, double> relation_check(const SpaceParams& params, const CoeffSeries& f, int q);

/// C(γ,t,k) = Γ(n+1+γ)Γ(n+1+k+γ+t) / (Γ(n+1+γ+t)Γ(n+1+k+γ)).
/// Throws PoleError when n+γ or n+γ+t is a negative integer.
double fractional_coeff(double gamma, double t, int k_deg, std::size_t n);
/// R^{γ,t} f = Σ C(γ,t,|k|) a_k z^k.
CoeffSeries apply_fractional(double gamma, double t, const CoeffSeries& f);

/// Monte Carlo estimate of ∫_B (‖∇f‖² - |Rf|²)(1-‖z‖²)^{-α} du for a
/// polynomial f. Requires α in (-1, 1); throws AlphaOutOfRange otherwise.
MeanEstimate mc_integral_norm(const SpaceParams& params, const CoeffSeries& f,
                              std::size_t samples, std::uint64_t seed);
/// Monte Carlo ∫_S |f|² dσ.
MeanEstimate mc_sphere_norm_sq(const CoeffSeries& f, std::size_t samples, std::uint64_t seed);
/// Monte Carlo ∫_B |f|² du.
MeanEstimate mc_ball_norm_sq(const CoeffSeries& f, std::size_t samples, std::uint64_t seed);

}  // namespace dlab
