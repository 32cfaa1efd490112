#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "dlab/series.hpp"

namespace testing {

using dlab::Complex;
using dlab::CoeffSeries;
using dlab::MultiIndex;

/// Random polynomial with about half of the monomials of degree <= `degree`
/// present and a nonzero constant term.
inline CoeffSeries random_poly(std::size_t n, int degree, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g;
  std::bernoulli_distribution keep(0.5);
  CoeffSeries::Terms terms;
  for (int d = 0; d <= degree; ++d) {
    for (const MultiIndex& k : dlab::enumerate(n, d)) {
      if (keep(rng)) terms.emplace(k, scale * Complex{g(rng), g(rng)});
    }
  }
  terms[MultiIndex::zero(n)] = Complex{1.0 + std::abs(g(rng)), g(rng)};
  return CoeffSeries(n, std::move(terms));
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// n!/(k_1!...) by repeated integer division; small arguments only.
inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

inline std::string index_string(const dlab::MultiIndex& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.dim(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s + ")";
}

}  // namespace testing
