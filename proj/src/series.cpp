#include "dlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "dlab/errors.hpp"

namespace dlab {

namespace {

std::optional<int> min_trunc(std::optional<int> a, std::optional<int> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

void require_same_dim(const CoeffSeries& f, const CoeffSeries& g) {
  if (f.dim() != g.dim()) {
    throw DimensionMismatch("series dimensions differ: " + std::to_string(f.dim()) + " vs " +
                            std::to_string(g.dim()));
  }
}

// Neumaier summation for one real component.
struct Compensated {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

CoeffSeries::CoeffSeries(std::size_t dim, std::optional<int> trunc_degree)
    : dim_(dim), trunc_(trunc_degree) {
  if (dim == 0 || dim > kMaxDim) throw PreconditionError("series dimension out of range");
  if (trunc_ && *trunc_ < 0) throw PreconditionError("truncation degree must be non-negative");
}

CoeffSeries::CoeffSeries(std::size_t dim, Terms terms, std::optional<int> trunc_degree)
    : CoeffSeries(dim, trunc_degree) {
  terms_ = std::move(terms);
  for (const auto& [k, c] : terms_) {
    if (k.dim() != dim_) throw DimensionMismatch("term index length differs from series dim");
  }
  normalize();
}

CoeffSeries CoeffSeries::constant(std::size_t dim, Complex value) {
  return CoeffSeries(dim, Terms{{MultiIndex::zero(dim), value}});
}

CoeffSeries CoeffSeries::monomial(const MultiIndex& k, Complex value) {
  return CoeffSeries(k.dim(), Terms{{k, value}});
}

Complex CoeffSeries::coeff(const MultiIndex& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Complex{} : it->second;
}

Complex CoeffSeries::constant_term() const { return coeff(MultiIndex::zero(dim_)); }

int CoeffSeries::max_degree() const {
  return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
}

CoeffSeries CoeffSeries::with_trunc(std::optional<int> trunc_degree) const {
  return CoeffSeries(dim_, terms_, trunc_degree);
}

void CoeffSeries::normalize() {
  std::erase_if(terms_, [this](const auto& kv) {
    return std::abs(kv.second) < kDropThreshold || (trunc_ && kv.first.degree() > *trunc_);
  });
}

CoeffSeries add(const CoeffSeries& f, const CoeffSeries& g) {
  require_same_dim(f, g);
  CoeffSeries::Terms terms = f.terms();
  for (const auto& [k, c] : g.terms()) terms[k] += c;
  return CoeffSeries(f.dim(), std::move(terms), min_trunc(f.trunc_degree(), g.trunc_degree()));
}

CoeffSeries sub(const CoeffSeries& f, const CoeffSeries& g) { return add(f, scale(g, -1.0)); }

CoeffSeries scale(const CoeffSeries& f, Complex c) {
  CoeffSeries::Terms terms = f.terms();
  for (auto& [k, v] : terms) v *= c;
  return CoeffSeries(f.dim(), std::move(terms), f.trunc_degree());
}

CoeffSeries mul(const CoeffSeries& f, const CoeffSeries& g) {
  require_same_dim(f, g);
  const auto trunc = min_trunc(f.trunc_degree(), g.trunc_degree());
  std::unordered_map<MultiIndex, Complex> acc;
  acc.reserve(f.size() * g.size());
  for (const auto& [kf, cf] : f.terms()) {
    for (const auto& [kg, cg] : g.terms()) {
      if (trunc && kf.degree() + kg.degree() > *trunc) continue;
      acc[kf + kg] += cf * cg;
    }
  }
  return CoeffSeries(f.dim(), CoeffSeries::Terms(acc.begin(), acc.end()), trunc);
}

CoeffSeries reciprocal(const CoeffSeries& f, int degree) {
  if (degree < 0) throw PreconditionError("reciprocal degree must be non-negative");
  const std::size_t n = f.dim();
  const Complex f0 = f.constant_term();
  if (std::abs(f0) <= kDropThreshold) throw ZeroConstantTerm();
  const Complex inv0 = 1.0 / f0;

  // Non-constant terms of f within the target degree.
  std::vector<std::pair<MultiIndex, Complex>> tail;
  for (const auto& [k, c] : f.terms()) {
    if (k.degree() > 0 && k.degree() <= degree) tail.emplace_back(k, c);
  }

  std::unordered_map<MultiIndex, Complex> g;
  g[MultiIndex::zero(n)] = inv0;
  for (int d = 1; d <= degree; ++d) {
    for (const MultiIndex& k : enumerate(n, d)) {
      Complex s{};
      for (const auto& [j, fj] : tail) {
        if (!j.dominated_by(k)) continue;
        auto it = g.find(k - j);
        if (it != g.end()) s += fj * it->second;
      }
      if (std::abs(s) >= kDropThreshold) g[k] = -inv0 * s;
    }
  }
  return CoeffSeries(n, CoeffSeries::Terms(g.begin(), g.end()), degree);
}

CoeffSeries dilate(const CoeffSeries& f, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw PreconditionError("dilation radius must lie in [0, 1]");
  CoeffSeries::Terms terms;
  for (const auto& [k, c] : f.terms()) {
    const double factor = k.degree() == 0 ? 1.0 : std::pow(r, k.degree());
    terms.emplace(k, c * factor);
  }
  return CoeffSeries(f.dim(), std::move(terms), f.trunc_degree());
}

ModelPolynomialSpec::ModelPolynomialSpec(std::size_t n_, std::size_t m_) : n(n_), m(m_) {
  if (n < 1 || n > kMaxDim) throw PreconditionError("model polynomial: n out of range");
  if (m < 1 || m > n) throw PreconditionError("model polynomial requires 1 <= m <= n");
}

double ModelPolynomialSpec::lambda() const {
  const double md = static_cast<double>(m);
  // m^{m/2}: exact integer power when m is even.
  if (m % 2 == 0) return std::pow(md, static_cast<double>(m / 2));
  return std::pow(md, static_cast<double>(m / 2)) * std::sqrt(md);
}

MultiIndex ModelPolynomialSpec::diagonal_unit() const {
  MultiIndex u = MultiIndex::zero(n);
  for (std::size_t i = 0; i < m; ++i) u.set(i, 1);
  return u;
}

std::vector<Complex> ModelPolynomialSpec::zero_set_point(const std::vector<double>& angles) const {
  if (angles.size() + 1 != m) throw PreconditionError("zero_set_point needs m-1 angles");
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<Complex> z(n, Complex{});
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    z[i] = std::polar(scale, angles[i]);
    total += angles[i];
  }
  z[m - 1] = std::polar(scale, -total);
  return z;
}

CoeffSeries model_polynomial(const ModelPolynomialSpec& spec) {
  CoeffSeries::Terms terms{{MultiIndex::zero(spec.n), 1.0},
                           {spec.diagonal_unit(), -spec.lambda()}};
  return CoeffSeries(spec.n, std::move(terms));
}

Complex evaluate(const CoeffSeries& f, const std::vector<Complex>& z) {
  if (z.size() != f.dim()) throw DimensionMismatch("evaluate: point dimension differs");
  Compensated re, im;
  for (const auto& [k, c] : f.terms()) {
    Complex term = c;
    for (std::size_t i = 0; i < k.dim(); ++i) {
      for (int e = 0; e < k[i]; ++e) term *= z[i];
    }
    re.add(term.real());
    im.add(term.imag());
  }
  return {re.value(), im.value()};
}

}  // namespace dlab
