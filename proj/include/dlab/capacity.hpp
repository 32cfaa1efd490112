#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dlab/monte_carlo.hpp"
#include "dlab/norms.hpp"
#include "dlab/series.hpp"

namespace dlab {

/// Normalized Haar measure on the (m-1)-torus Z(p) ∩ S_n of the model polynomial.
struct ModelTorus {
  std::size_t n = 1;
  std::size_t m = 1;
};

/// Finite atomic measure Σ w_i δ_{ζ_i} on S_n.
struct PointCloud {
  std::vector<Point> points;
  std::vector<double> weights;
};

class SphereMeasure {
 public:
  static SphereMeasure model_torus(std::size_t n, std::size_t m);
  /// Validates unit-norm points (1e-10) and non-negative weights summing to 1 (1e-12).
  static SphereMeasure point_cloud(std::vector<Point> points, std::vector<double> weights);

  std::size_t n() const;
  const std::variant<ModelTorus, PointCloud>& kind() const { return kind_; }
  const ModelTorus* as_torus() const { return std::get_if<ModelTorus>(&kind_); }
  const PointCloud* as_cloud() const { return std::get_if<PointCloud>(&kind_); }

 private:
  explicit SphereMeasure(std::variant<ModelTorus, PointCloud> kind) : kind_(std::move(kind)) {}
  std::variant<ModelTorus, PointCloud> kind_;
};

/// `count` equally weighted uniform samples of a model torus measure.
SphereMeasure sample_model_torus(std::size_t n, std::size_t m, std::size_t count,
                                 std::uint64_t seed);

/// Moments μ*(j) = ∫ζ^j dμ and μ̄*(j) = ∫ζ̄^j dμ for |j| <= max_degree.
/// Entries absent from the maps are zero.
struct MomentTable {
  std::size_t n = 1;
  int max_degree = 0;
  std::map<MultiIndex, Complex> moments;
  std::map<MultiIndex, Complex> conj_moments;
  /// log|μ̄*(j)| for every stored entry (-∞ for zeros); model moments
  /// underflow doubles long before the series terms do.
  std::map<MultiIndex, double> log_abs_conj;
  /// True for closed-form model moments, false for sums over sample points.
  bool exact = false;
};

MomentTable moments(const SphereMeasure& mu, int max_degree);

/// T_k = (k+1)^{n-1-α} Σ_{|j|=k} (k!/j!) |μ̄*(j)|² for k = 0..K.
std::vector<double> cauchy_norm_terms(const MomentTable& table, std::size_t n, double alpha,
                                      int max_k);

/// The same terms for an atomic measure through the multinomial identity
/// Σ_{|j|=k}(k!/j!)|μ̄*(j)|² = Σ_{a,b} w_a w_b ⟨ζ_b, ζ_a⟩^k.
std::vector<double> cauchy_norm_terms_pairwise(const PointCloud& cloud, double alpha, int max_k);

enum class SeriesVerdict { Converges, Diverges, Indeterminate };

std::string to_string(SeriesVerdict v);

struct CauchyVerdict {
  SeriesVerdict verdict = SeriesVerdict::Indeterminate;
  /// Fitted ρ in T_k ≈ C (k+1)^ρ over the window.
  double rho = 0.0;
  double partial_sum = 0.0;
  /// Partial sum plus the fitted power-law tail, when converging.
  std::optional<double> sum_estimate;
  std::string note;
};

/// Margin around ρ = -1 inside which the verdict is Indeterminate.
inline constexpr double kRhoMargin = 0.1;

/// Fits ρ over terms[first..] (default: the upper half). Needs >= 20 terms.
CauchyVerdict cauchy_convergence_verdict(const std::vector<double>& terms,
                                         std::optional<std::size_t> first = std::nullopt);

struct CauchyThreshold {
  /// Largest α with a Diverges verdict.
  double diverges_until = 0.0;
  /// Smallest α with a Converges verdict.
  double converges_from = 0.0;
  /// Midpoint of the two.
  double flip = 0.0;
};

/// Bisection in α on the model-torus verdict with `terms` Cauchy terms.
CauchyThreshold locate_cauchy_threshold(std::size_t n, std::size_t m, int terms,
                                        double tolerance = 1e-3);

/// K_α(t) = t^{α-n} for α in (0,n), log(e/t) for α = n; K(0) = +∞.
double riesz_kernel(double t, double alpha, std::size_t n);

struct MonteCarloScheme {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
};

/// Product-trapezoid grid on the torus with `points` nodes per angle at the
/// coarsest level; each refinement multiplies the node count per angle by 4.
struct TorusGridScheme {
  std::size_t points = 0;  // 0 selects default_torus_grid_points(m)
  int refinements = 2;
};

using EnergyScheme = std::variant<MonteCarloScheme, TorusGridScheme>;

std::size_t default_torus_grid_points(std::size_t m);

struct EnergyEstimate {
  bool finite = false;
  /// Extrapolated energy when finite, +∞ otherwise.
  double value = 0.0;
  double error = 0.0;
  /// Grid scheme: energy at each level; MC scheme: the single estimate.
  std::vector<double> refinements;
  std::vector<std::size_t> level_points;
  std::string note;
};

/// I_α[μ] = ∬ K_α(|1 - ⟨ζ,η⟩|) dμ dμ. Requires 0 < α <= n.
EnergyEstimate riesz_energy(const SphereMeasure& mu, double alpha, std::size_t n,
                            const EnergyScheme& scheme);

enum class CertificateVerdict { NonCyclic, Inconclusive };

std::string to_string(CertificateVerdict v);

struct CertificateOptions {
  int cauchy_terms = 4000;
  TorusGridScheme grid{};
  MonteCarloScheme monte_carlo{};
  /// Torus support points per angle (capped at 4096 points in total).
  std::size_t support_points_per_angle = 64;
};

struct CertificateReport {
  /// max |f(ζ)| over the measure's sample points.
  double support_check = 0.0;
  bool support_ok = false;
  /// Present when 0 < α <= n.
  std::optional<EnergyEstimate> energy;
  CauchyVerdict cauchy;
  CertificateVerdict verdict = CertificateVerdict::Inconclusive;
  std::string reason;
};

/// Support values below this count as zeros of f on supp μ.
inline constexpr double kSupportTolerance = 1e-8;

/// NonCyclic only when f vanishes on the support and the Cauchy series
/// converges; never claims cyclicity. Requires α > 0 and a polynomial f.
CertificateReport noncyclicity_certificate(const CoeffSeries& f, const SphereMeasure& mu,
                                           const SpaceParams& params,
                                           const CertificateOptions& options = {});

}  // namespace dlab
