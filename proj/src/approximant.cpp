#include "dlab/approximant.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dlab/errors.hpp"
#include "dlab/fit.hpp"

namespace dlab {

namespace {

struct CholeskySolution {
  Eigen::VectorXcd x;
  double cond_estimate = 1.0;
  bool regularized = false;
};

// Solves the Hermitian system after symmetric Jacobi scaling, so that the
// factorization sees a unit diagonal regardless of the weight spread.
CholeskySolution jacobi_cholesky(const Eigen::MatrixXcd& g, const Eigen::VectorXcd& b) {
  const Eigen::Index size = g.rows();
  Eigen::VectorXd d(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const double diag = g(i, i).real();
    if (!(diag > 0.0)) throw NumericallySingular("Gram matrix has a non-positive diagonal entry");
    d(i) = 1.0 / std::sqrt(diag);
  }
  Eigen::MatrixXcd scaled = d.asDiagonal() * g * d.asDiagonal();
  const Eigen::VectorXcd rhs = d.asDiagonal() * b;

  CholeskySolution out;
  Eigen::LLT<Eigen::MatrixXcd> llt(scaled);
  if (llt.info() != Eigen::Success) {
    scaled.diagonal().array() += 1e-12;
    llt.compute(scaled);
    out.regularized = true;
    if (llt.info() != Eigen::Success) {
      throw NumericallySingular("Cholesky failed after a 1e-12 diagonal shift");
    }
  }
  const Eigen::VectorXd pivots = llt.matrixLLT().diagonal().real();
  const double lo = pivots.minCoeff();
  const double hi = pivots.maxCoeff();
  out.cond_estimate = lo > 0.0 ? (hi * hi) / (lo * lo) : INFINITY;
  out.x = d.asDiagonal() * llt.solve(rhs);
  return out;
}

}  // namespace

bool ApproximantResult::distances_agree(double floor_scale) const {
  const double scale = std::max({dist_sq, dist_sq_direct, 1e-6 * floor_scale});
  return std::abs(dist_sq - dist_sq_direct) <= 1e-8 * scale;
}

Complex gram_entry(const SpaceParams& params, const CoeffSeries& f, const MultiIndex& k,
                   const MultiIndex& j) {
  const Weight w(params);
  Complex s{};
  // m = k + t for each term t of f; the partner coefficient sits at m - j.
  for (const auto& [t, at] : f.terms()) {
    const MultiIndex m = k + t;
    if (!j.dominated_by(m)) continue;
    const Complex partner = f.coeff(m - j);
    if (partner == Complex{}) continue;
    s += w(m) * at * std::conj(partner);
  }
  return s;
}

GramSystem assemble_gram(const SpaceParams& params, const CoeffSeries& f, int order) {
  if (f.dim() != params.n) throw DimensionMismatch("assemble_gram: series dim differs from n");
  if (order < 0) throw PreconditionError("approximant order must be non-negative");
  const double size_d = std::pow(static_cast<double>(order) + 1.0, static_cast<double>(params.n));
  if (size_d > static_cast<double>(kMaxBasis)) {
    throw BasisTooLarge("basis (N+1)^n = " + std::to_string(static_cast<long long>(size_d)) +
                        " exceeds " + std::to_string(kMaxBasis));
  }
  GramSystem sys;
  sys.basis = enumerate_box(params.n, order);
  const auto size = static_cast<Eigen::Index>(sys.basis.size());
  std::unordered_map<MultiIndex, Eigen::Index> position;
  for (Eigen::Index i = 0; i < size; ++i) position.emplace(sys.basis[static_cast<std::size_t>(i)], i);

  const Weight w(params);
  w.reserve(order * static_cast<int>(params.n) + std::max(f.max_degree(), 0));
  std::vector<std::pair<MultiIndex, Complex>> terms(f.terms().begin(), f.terms().end());

  sys.matrix = Eigen::MatrixXcd::Zero(size, size);
  parallel_for(static_cast<std::size_t>(size), [&](std::size_t col) {
    const MultiIndex& k = sys.basis[col];
    for (const auto& [s, as] : terms) {
      const MultiIndex m = k + s;
      const double wm = w(m);
      for (const auto& [t, at] : terms) {
        if (!t.dominated_by(m)) continue;
        const MultiIndex j = m - t;
        auto it = position.find(j);
        if (it == position.end()) continue;
        sys.matrix(it->second, static_cast<Eigen::Index>(col)) += wm * as * std::conj(at);
      }
    }
  });

  sys.rhs = Eigen::VectorXcd::Zero(size);
  sys.rhs(0) = w(MultiIndex::zero(params.n)) * std::conj(f.constant_term());
  return sys;
}

ApproximantResult solve(const SpaceParams& params, const CoeffSeries& f, int order) {
  if (f.empty()) throw PreconditionError("solve requires f != 0");
  ApproximantResult result;
  result.order = order;
  if (!f.is_polynomial() && *f.trunc_degree() < order * static_cast<int>(params.n)) {
    result.warnings.push_back("f is truncated at degree " + std::to_string(*f.trunc_degree()) +
                              "; Gram entries ignore its tail");
  }
  const GramSystem sys = assemble_gram(params, f.with_trunc(std::nullopt), order);
  const CholeskySolution sol = jacobi_cholesky(sys.matrix, sys.rhs);
  result.cond_estimate = sol.cond_estimate;
  result.regularized = sol.regularized;
  if (sol.regularized) result.warnings.push_back("Gram matrix regularized by 1e-12 shift");

  CoeffSeries::Terms terms;
  for (std::size_t i = 0; i < sys.basis.size(); ++i) {
    terms.emplace(sys.basis[i], sol.x(static_cast<Eigen::Index>(i)));
  }
  result.coeffs = CoeffSeries(params.n, std::move(terms));

  const double one_sq = std::pow(static_cast<double>(params.n), params.alpha);
  const double gain = (std::conj(sol.x(0)) * sys.rhs(0)).real();
  result.dist_sq = std::max(0.0, one_sq - gain);

  const CoeffSeries residual =
      sub(mul(result.coeffs, f.with_trunc(std::nullopt)), CoeffSeries::constant(params.n, 1.0));
  result.dist_sq_direct = norm_sq(params, residual).value;
  return result;
}

std::vector<DecayRow> decay_sweep(const SpaceParams& params, const CoeffSeries& f,
                                  const std::vector<int>& orders) {
  if (!std::is_sorted(orders.begin(), orders.end())) {
    throw PreconditionError("decay_sweep: orders must be ascending");
  }
  const double one_sq = std::pow(static_cast<double>(params.n), params.alpha);
  std::vector<DecayRow> rows(orders.size());
  parallel_for(orders.size(), [&](std::size_t i) {
    rows[i].order = orders[i];
    rows[i].dist_sq = solve(params, f, orders[i]).dist_sq;
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double prev = rows[i - 1].dist_sq;
    const double cur = rows[i].dist_sq;
    if (cur > prev + 1e-9 * prev + 1e-14 * one_sq) {
      throw Error("decay_sweep: dist_sq increased from N=" + std::to_string(rows[i - 1].order) +
                  " to N=" + std::to_string(rows[i].order));
    }
    if (prev > 0.0 && cur > 0.0 && rows[i].order != rows[i - 1].order) {
      rows[i].running_slope = (std::log(cur) - std::log(prev)) /
                              (std::log(rows[i].order + 1.0) - std::log(rows[i - 1].order + 1.0));
    }
  }
  return rows;
}

DecayFit fit_decay(const std::vector<DecayRow>& table, double beta, FitWindow window) {
  if (beta > 1.0) throw BetaAboveOne(beta);
  const std::size_t first = window == FitWindow::UpperHalf ? table.size() / 2 : 0;
  if (table.size() < first + 5) throw InsufficientData("fit_decay needs at least 5 points");
  DecayFit fit;
  fit.beta = beta;
  fit.points = table.size() - first;
  if (beta < 1.0) {
    std::vector<double> x, y;
    for (std::size_t i = first; i < table.size(); ++i) {
      if (!(table[i].dist_sq > 0.0)) throw InsufficientData("fit_decay: non-positive dist_sq");
      x.push_back(std::log(table[i].order + 1.0));
      y.push_back(std::log(table[i].dist_sq));
    }
    const LineFit line = fit_line(x, y);
    fit.slope = line.slope;
    fit.target = -(1.0 - beta);
    fit.residual = line.residual;
  } else {
    std::vector<double> products;
    for (std::size_t i = first; i < table.size(); ++i) {
      products.push_back(table[i].dist_sq * std::log(table[i].order + 1.0));
    }
    double mean = 0.0;
    for (double p : products) mean += p;
    mean /= static_cast<double>(products.size());
    const auto [lo, hi] = std::minmax_element(products.begin(), products.end());
    fit.product_mean = mean;
    fit.product_drift = (products.back() - products.front()) / mean;
    fit.product_spread = *hi / *lo - 1.0;
    double ss = 0.0;
    for (double p : products) ss += (p - mean) * (p - mean);
    fit.residual = std::sqrt(ss / static_cast<double>(products.size()));
  }
  return fit;
}

DiagonalApproximant diagonal_fast_path(const SpaceParams& params, const DiagonalSpec& spec,
                                       const OneVarSeries& f, int order,
                                       bool compare_multivariate) {
  if (params.n != spec.n()) throw DimensionMismatch("diagonal_fast_path: n differs from spec");
  if (order < 0) throw PreconditionError("approximant order must be non-negative");
  if (f.coeffs.empty()) throw PreconditionError("diagonal_fast_path requires f != 0");
  const double beta = spec.beta(params.alpha);
  const double log_mu = std::log(spec.mu());
  const std::size_t len = f.coeffs.size();
  const auto size = static_cast<Eigen::Index>(order + 1);
  const std::size_t top = static_cast<std::size_t>(order) + len;
  std::vector<double> weights(top);
  for (std::size_t l = 0; l < top; ++l) {
    const double ld = static_cast<double>(l);
    weights[l] = std::exp(-0.5 * ld * log_mu + beta * std::log(ld + 1.0));
  }

  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index k = 0; k < size; ++k) {
    for (Eigen::Index j = 0; j < size; ++j) {
      Complex s{};
      const std::size_t lo = static_cast<std::size_t>(std::max(j, k));
      const std::size_t hi = static_cast<std::size_t>(std::min(j, k)) + len;
      for (std::size_t l = lo; l < hi; ++l) {
        s += weights[l] * f.coeffs[l - static_cast<std::size_t>(k)] *
             std::conj(f.coeffs[l - static_cast<std::size_t>(j)]);
      }
      g(j, k) = s;
    }
  }
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(size);
  b(0) = weights[0] * std::conj(f.coeffs[0]);
  const CholeskySolution sol = jacobi_cholesky(g, b);

  DiagonalApproximant out;
  out.approximant.mu = spec.mu();
  out.approximant.coeffs.assign(sol.x.data(), sol.x.data() + size);
  out.dist_sq = std::max(0.0, weights[0] - (std::conj(sol.x(0)) * b(0)).real());
  out.lifted = lift(out.approximant, spec);
  if (compare_multivariate) {
    const double basis = std::pow(order + 1.0, static_cast<double>(params.n));
    if (basis <= static_cast<double>(kMaxBasis)) {
      out.multivariate_dist_sq = solve(params, lift(f, spec), order).dist_sq;
      if (out.dist_sq > 0.0) out.ratio = *out.multivariate_dist_sq / out.dist_sq;
    }
  }
  return out;
}

}  // namespace dlab
