#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace dlab {

/// Largest ambient dimension n supported by the fixed-capacity MultiIndex.
inline constexpr std::size_t kMaxDim = 8;

/// Exponent tuple k = (k_1, ..., k_n) of a monomial z^k, with |k| cached.
///
/// Ordering is graded lexicographic: by total degree first, then
/// lexicographically. Within a single degree shell this is plain
/// lexicographic order, which is the canonical basis order of the library.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::span<const int> entries);

  static MultiIndex zero(std::size_t dim);
  /// k with a single 1 in position `i`.
  static MultiIndex unit(std::size_t dim, std::size_t i);

  std::size_t dim() const { return dim_; }
  int degree() const { return degree_; }
  int operator[](std::size_t i) const { return entries_[i]; }
  void set(std::size_t i, int value);
  std::span<const int> entries() const { return {entries_.data(), dim_}; }

  /// Componentwise k <= other.
  bool dominated_by(const MultiIndex& other) const;

  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
  /// Componentwise difference; requires b.dominated_by(a).
  friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
  friend MultiIndex operator*(int scale, const MultiIndex& k);

  friend bool operator==(const MultiIndex& a, const MultiIndex& b);
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b);

  std::size_t hash() const;

 private:
  std::array<std::int32_t, kMaxDim> entries_{};
  std::size_t dim_ = 0;
  int degree_ = 0;
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& k);

/// ln(k!) for k = 0..K_max, built once by compensated cumulative summation so
/// that consecutive differences equal ln(k) to rounding.
class LogFactorialTable {
 public:
  explicit LogFactorialTable(int k_max);

  int k_max() const { return static_cast<int>(values_.size()) - 1; }
  double operator()(int k) const { return values_[static_cast<std::size_t>(k)]; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// ln(k!) from a process-wide table; falls back to lgamma past its end.
double log_factorial(int k);
/// Σ ln(k_i!).
double log_factorial(const MultiIndex& k);

/// All multi-indices of length n with |k| = d, in lexicographic order.
std::vector<MultiIndex> enumerate(std::size_t n, int d);
/// All multi-indices with every entry in [0, cap], lexicographic.
std::vector<MultiIndex> enumerate_box(std::size_t n, int cap);
/// Number of multi-indices of length n and degree d, C(d+n-1, n-1).
std::uint64_t count_of_degree(std::size_t n, int d);

struct Multinomial {
  std::optional<std::uint64_t> exact;  // present when k <= 20
  double log_value = 0.0;
};

/// k!/j! for |j| = k. Throws PreconditionError on degree mismatch.
Multinomial multinomial(int k, const MultiIndex& j);

/// ∫_S |ζ^k|² dσ = (n-1)! k! / (n-1+|k|)!.
double sphere_monomial_integral(const MultiIndex& k, std::size_t n);
/// ∫_B |z^k|² du = n! k! / (n+|k|)!.
double ball_monomial_integral(const MultiIndex& k, std::size_t n);

/// Whether j_1!⋯j_n! >= (k!)^n, evaluated in log space. Requires |j| = n·k.
bool factorial_inequality_check(const MultiIndex& j, int k);

}  // namespace dlab

template <>
struct std::hash<dlab::MultiIndex> {
  std::size_t operator()(const dlab::MultiIndex& k) const noexcept { return k.hash(); }
};
