#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "dlab/diagonal.hpp"
#include "dlab/norms.hpp"
#include "dlab/series.hpp"

namespace dlab {

/// Largest basis (N+1)^n accepted by solve().
inline constexpr std::size_t kMaxBasis = 20000;

/// Normal equations G c = b for min ‖p f - 1‖_α over p in P_N^n.
struct GramSystem {
  /// Exponents j of z^j, every entry in [0, N], lexicographic.
  std::vector<MultiIndex> basis;
  /// G[j,k] = ⟨z^k f, z^j f⟩_α.
  Eigen::MatrixXcd matrix;
  /// b[j] = ⟨1, z^j f⟩_α; only b[0] = n^α conj(a_0) is nonzero.
  Eigen::VectorXcd rhs;
};

/// ⟨z^k f, z^j f⟩_α = Σ_m w(m) a_{m-k} conj(a_{m-j}).
Complex gram_entry(const SpaceParams& params, const CoeffSeries& f, const MultiIndex& k,
                   const MultiIndex& j);

GramSystem assemble_gram(const SpaceParams& params, const CoeffSeries& f, int order);

struct ApproximantResult {
  int order = 0;
  /// The optimal approximant p_N.
  CoeffSeries coeffs{1};
  /// ‖1‖²_α - Re⟨b, c⟩, clamped at 0.
  double dist_sq = 0.0;
  /// norm_sq(p_N f - 1) computed directly from the residual series.
  double dist_sq_direct = 0.0;
  /// Ratio of extreme squared pivots of the Jacobi-scaled Cholesky factor.
  double cond_estimate = 1.0;
  /// True when the Cholesky retry with a 1e-12 diagonal shift was needed.
  bool regularized = false;
  std::vector<std::string> warnings;

  /// |dist_sq - dist_sq_direct| within 1e-8 relative (absolute floor 1e-14·n^α).
  bool distances_agree(double floor_scale) const;
};

/// Optimal approximant of order N to 1/f in D_α(B_n).
/// Throws BasisTooLarge past kMaxBasis and NumericallySingular when both
/// Cholesky attempts fail.
ApproximantResult solve(const SpaceParams& params, const CoeffSeries& f, int order);

struct DecayRow {
  int order = 0;
  double dist_sq = 0.0;
  /// Local log-log slope against the previous row.
  std::optional<double> running_slope;
};

/// solve() over ascending orders; asserts dist_sq is non-increasing.
std::vector<DecayRow> decay_sweep(const SpaceParams& params, const CoeffSeries& f,
                                  const std::vector<int>& orders);

enum class FitWindow { UpperHalf, All };

struct DecayFit {
  double beta = 0.0;
  std::size_t points = 0;
  /// β < 1: least-squares slope of log dist² against log(N+1), target -(1-β).
  std::optional<double> slope;
  std::optional<double> target;
  double residual = 0.0;
  /// β = 1: statistics of dist²·log(N+1).
  std::optional<double> product_mean;
  /// (last - first)/mean of the product.
  std::optional<double> product_drift;
  /// max/min - 1 of the product.
  std::optional<double> product_spread;
};

/// Needs at least five rows in the window and β <= 1.
DecayFit fit_decay(const std::vector<DecayRow>& table, double beta,
                   FitWindow window = FitWindow::UpperHalf);

struct DiagonalApproximant {
  OneVarSeries approximant;
  /// lift(q_N), an element of P_N^n.
  CoeffSeries lifted{1};
  /// dist² in d_β between 1 and f̃·P_N^1.
  double dist_sq = 0.0;
  std::optional<double> multivariate_dist_sq;
  /// multivariate_dist_sq / dist_sq.
  std::optional<double> ratio;
};

/// One-variable normal equations in d_β(α) for f = lift(f̃); optionally also
/// solves the full multivariate problem for comparison.
DiagonalApproximant diagonal_fast_path(const SpaceParams& params, const DiagonalSpec& spec,
                                       const OneVarSeries& f, int order,
                                       bool compare_multivariate = false);

}  // namespace dlab
