#include "dlab/multiindex.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "dlab/errors.hpp"

namespace dlab {

namespace {

void check_dim(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw PreconditionError("multi-index dimension must be in [1, " + std::to_string(kMaxDim) +
                            "], got " + std::to_string(dim));
  }
}

}  // namespace

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::span<const int>(entries.begin(), entries.size())) {}

MultiIndex::MultiIndex(std::span<const int> entries) : dim_(entries.size()) {
  check_dim(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (entries[i] < 0) throw PreconditionError("multi-index entries must be non-negative");
    entries_[i] = entries[i];
    degree_ += entries[i];
  }
}

MultiIndex MultiIndex::zero(std::size_t dim) {
  check_dim(dim);
  MultiIndex k;
  k.dim_ = dim;
  return k;
}

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t i) {
  MultiIndex k = zero(dim);
  k.set(i, 1);
  return k;
}

void MultiIndex::set(std::size_t i, int value) {
  if (value < 0) throw PreconditionError("multi-index entries must be non-negative");
  degree_ += value - entries_[i];
  entries_[i] = value;
}

bool MultiIndex::dominated_by(const MultiIndex& other) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (entries_[i] > other.entries_[i]) return false;
  }
  return true;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim_ != b.dim_) throw DimensionMismatch("multi-index dimension mismatch");
  MultiIndex out = a;
  for (std::size_t i = 0; i < a.dim_; ++i) out.entries_[i] += b.entries_[i];
  out.degree_ = a.degree_ + b.degree_;
  return out;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim_ != b.dim_) throw DimensionMismatch("multi-index dimension mismatch");
  if (!b.dominated_by(a)) throw PreconditionError("multi-index difference would be negative");
  MultiIndex out = a;
  for (std::size_t i = 0; i < a.dim_; ++i) out.entries_[i] -= b.entries_[i];
  out.degree_ = a.degree_ - b.degree_;
  return out;
}

MultiIndex operator*(int scale, const MultiIndex& k) {
  if (scale < 0) throw PreconditionError("multi-index scale must be non-negative");
  MultiIndex out = k;
  for (std::size_t i = 0; i < k.dim_; ++i) out.entries_[i] *= scale;
  out.degree_ = k.degree_ * scale;
  return out;
}

bool operator==(const MultiIndex& a, const MultiIndex& b) {
  return a.dim_ == b.dim_ && a.entries_ == b.entries_;
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  for (std::size_t i = 0; i < a.dim_; ++i) {
    if (auto c = a.entries_[i] <=> b.entries_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::size_t MultiIndex::hash() const {
  std::size_t h = dim_;
  for (std::size_t i = 0; i < dim_; ++i) {
    h ^= static_cast<std::size_t>(entries_[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& k) {
  os << '(';
  for (std::size_t i = 0; i < k.dim(); ++i) {
    if (i) os << ',';
    os << k[i];
  }
  return os << ')';
}

LogFactorialTable::LogFactorialTable(int k_max) {
  if (k_max < 0) throw PreconditionError("log-factorial table size must be non-negative");
  values_.resize(static_cast<std::size_t>(k_max) + 1);
  values_[0] = 0.0;
  double sum = 0.0;
  double carry = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double y = std::log(static_cast<double>(k)) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    values_[static_cast<std::size_t>(k)] = sum;
  }
}

double log_factorial(int k) {
  static const LogFactorialTable table(1 << 17);
  if (k < 0) throw PreconditionError("log_factorial of a negative integer");
  if (k <= table.k_max()) return table(k);
  return std::lgamma(static_cast<double>(k) + 1.0);
}

double log_factorial(const MultiIndex& k) {
  double s = 0.0;
  for (int e : k.entries()) s += log_factorial(e);
  return s;
}

std::vector<MultiIndex> enumerate(std::size_t n, int d) {
  check_dim(n);
  std::vector<MultiIndex> out;
  if (d < 0) return out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count_of_degree(n, d), 1u << 24)));
  // Odometer over the first n-1 entries; the last entry takes the remainder.
  // Iterating entry 0 slowest gives lexicographic order.
  std::vector<int> e(n, 0);
  auto emit = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == n) {
      e[pos] = remaining;
      out.emplace_back(std::span<const int>(e));
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      e[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  emit(emit, 0, d);
  return out;
}

std::vector<MultiIndex> enumerate_box(std::size_t n, int cap) {
  check_dim(n);
  std::vector<MultiIndex> out;
  if (cap < 0) return out;
  std::vector<int> e(n, 0);
  while (true) {
    out.emplace_back(std::span<const int>(e));
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (e[pos] < cap) {
        ++e[pos];
        break;
      }
      e[pos] = 0;
      if (pos == 0) return out;
    }
  }
}

std::uint64_t count_of_degree(std::size_t n, int d) {
  if (d < 0) return 0;
  // C(d+n-1, n-1) built incrementally; exact while intermediate values fit.
  std::uint64_t c = 1;
  for (std::size_t i = 1; i < n; ++i) {
    c = c * (static_cast<std::uint64_t>(d) + i) / i;
  }
  return c;
}

Multinomial multinomial(int k, const MultiIndex& j) {
  if (j.degree() != k) {
    throw PreconditionError("multinomial: |j| = " + std::to_string(j.degree()) +
                            " does not match k = " + std::to_string(k));
  }
  Multinomial out;
  out.log_value = log_factorial(k) - log_factorial(j);
  if (k <= 20) {
    // Product of binomials C(j_1+...+j_i, j_i); every partial value divides
    // k!/j! and stays below 20! < 2^64.
    std::uint64_t value = 1;
    int partial = 0;
    for (int e : j.entries()) {
      for (int t = 1; t <= e; ++t) {
        ++partial;
        value = value * static_cast<std::uint64_t>(partial) / static_cast<std::uint64_t>(t);
      }
    }
    out.exact = value;
  }
  return out;
}

double sphere_monomial_integral(const MultiIndex& k, std::size_t n) {
  if (k.dim() != n) throw DimensionMismatch("sphere_monomial_integral: index length != n");
  const int nn = static_cast<int>(n);
  return std::exp(log_factorial(nn - 1) + log_factorial(k) - log_factorial(nn - 1 + k.degree()));
}

double ball_monomial_integral(const MultiIndex& k, std::size_t n) {
  if (k.dim() != n) throw DimensionMismatch("ball_monomial_integral: index length != n");
  const int nn = static_cast<int>(n);
  return std::exp(log_factorial(nn) + log_factorial(k) - log_factorial(nn + k.degree()));
}

bool factorial_inequality_check(const MultiIndex& j, int k) {
  const int n = static_cast<int>(j.dim());
  if (k < 0 || j.degree() != n * k) {
    throw PreconditionError("factorial_inequality_check requires |j| = n*k");
  }
  const double lhs = log_factorial(j);
  const double rhs = n * log_factorial(k);
  return lhs >= rhs - 1e-12 * std::max(1.0, std::abs(rhs));
}

}  // namespace dlab
