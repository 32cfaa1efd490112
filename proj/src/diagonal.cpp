#include "dlab/diagonal.hpp"

#include <algorithm>
#include <cmath>

#include "dlab/errors.hpp"

namespace dlab {

namespace {

// μ^{l/4}; lift multiplies and project divides by the same value.
double diagonal_scale(std::size_t l, double mu) {
  return std::pow(mu, 0.25 * static_cast<double>(l));
}

}  // namespace

double mu_const(const MultiIndex& M, std::size_t m) {
  if (m < 1 || m > M.dim()) throw PreconditionError("mu_const requires 1 <= m <= n");
  double total = 0.0;
  double log_den = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (M[i] < 1) throw PreconditionError("mu_const requires M_i >= 1 for active variables");
    const double mi = static_cast<double>(M[i]);
    total += mi;
    log_den += mi * std::log(mi);
  }
  return std::exp(total * std::log(total) - log_den);
}

double beta_of_alpha(double alpha, std::size_t n, std::size_t m) {
  return alpha - static_cast<double>(n) + (static_cast<double>(m) + 1.0) / 2.0;
}

DiagonalSpec::DiagonalSpec(std::size_t m, MultiIndex M) : m_(m), M_(M), mu_(mu_const(M, m)) {
  for (std::size_t i = m; i < M.dim(); ++i) {
    if (M[i] != 0) throw PreconditionError("DiagonalSpec requires M_i = 0 beyond m");
  }
}

DiagonalSpec DiagonalSpec::model(std::size_t n, std::size_t m) {
  MultiIndex M = MultiIndex::zero(n);
  if (m < 1 || m > n) throw PreconditionError("DiagonalSpec::model requires 1 <= m <= n");
  for (std::size_t i = 0; i < m; ++i) M.set(i, 1);
  return DiagonalSpec(m, M);
}

double dbeta_norm_sq(const OneVarSeries& f, double beta) {
  return dbeta_inner(f, f, beta).real();
}

Complex dbeta_inner(const OneVarSeries& f, const OneVarSeries& g, double beta) {
  const double log_mu = std::log(f.mu);
  Complex s{};
  const std::size_t len = std::min(f.coeffs.size(), g.coeffs.size());
  for (std::size_t l = 0; l < len; ++l) {
    const double ld = static_cast<double>(l);
    const double w = std::exp(-0.5 * ld * log_mu + beta * std::log(ld + 1.0));
    s += w * f.coeffs[l] * std::conj(g.coeffs[l]);
  }
  return s;
}

CoeffSeries lift(const OneVarSeries& f, const DiagonalSpec& spec) {
  CoeffSeries::Terms terms;
  for (std::size_t l = 0; l < f.coeffs.size(); ++l) {
    terms.emplace(static_cast<int>(l) * spec.M(), diagonal_scale(l, spec.mu()) * f.coeffs[l]);
  }
  return CoeffSeries(spec.n(), std::move(terms));
}

OneVarSeries project(const CoeffSeries& r, const DiagonalSpec& spec) {
  if (r.dim() != spec.n()) throw DimensionMismatch("project: series dim differs from spec");
  OneVarSeries out;
  out.mu = spec.mu();
  const int step = spec.M().degree();
  for (const auto& [k, c] : r.terms()) {
    if (k.degree() % step != 0) continue;
    const int l = k.degree() / step;
    if (!(l * spec.M() == k)) continue;
    if (out.coeffs.size() <= static_cast<std::size_t>(l)) out.coeffs.resize(l + 1);
    const auto idx = static_cast<std::size_t>(l);
    out.coeffs[idx] = c / diagonal_scale(idx, spec.mu());
  }
  return out;
}

double phi_beta(double t, double beta) {
  if (beta > 1.0) throw BetaAboveOne(beta);
  if (t < 0.0) throw PreconditionError("phi_beta requires t >= 0");
  if (beta < 1.0) return std::pow(t, 1.0 - beta);
  return t > 1.0 ? std::log(t) : 0.0;
}

double norm_equivalence_probe(const OneVarSeries& f, const DiagonalSpec& spec, double alpha) {
  OneVarSeries scaled = f;
  scaled.mu = spec.mu();
  const double den = dbeta_norm_sq(scaled, spec.beta(alpha));
  if (den <= 0.0) throw PreconditionError("norm_equivalence_probe: zero one-variable series");
  const double num = norm_sq(SpaceParams(spec.n(), alpha), lift(f, spec)).value;
  return num / den;
}

}  // namespace dlab
