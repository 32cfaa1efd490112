#include <doctest.h>

#include "dlab/errors.hpp"
#include "dlab/norms.hpp"
#include "support.hpp"

using namespace dlab;
using testing::factorial;

namespace {

// The weight straight from its definition with plain factorials.
double weight_oracle(std::size_t n, double alpha, const MultiIndex& k) {
  double kf = 1.0;
  for (std::size_t i = 0; i < n; ++i) kf *= factorial(k[i]);
  return std::pow(n + k.degree(), alpha) * factorial(static_cast<int>(n) - 1) * kf /
         factorial(static_cast<int>(n) - 1 + k.degree());
}

}  // namespace

TEST_CASE("weights") {
  CHECK(weight(SpaceParams(2, 0.0), MultiIndex{0, 0}) == doctest::Approx(1.0));
  CHECK(weight(SpaceParams(2, 0.0), MultiIndex{1, 0}) == doctest::Approx(0.5));
  CHECK(weight(SpaceParams(2, 2.0), MultiIndex{1, 1}) == doctest::Approx(8.0 / 3.0));
  for (std::size_t n = 1; n <= 4; ++n) {
    for (double alpha : {-1.0, 0.0, 1.0, static_cast<double>(n), 2.5}) {
      const SpaceParams p(n, alpha);
      CHECK(weight(p, MultiIndex::zero(n)) == doctest::Approx(std::pow(n, alpha)).epsilon(1e-15));
      for (int d = 0; d <= 8; ++d) {
        for (const auto& k : enumerate(n, d)) {
          const double w = weight(p, k);
          CHECK(w > 0.0);
          CHECK(w == doctest::Approx(weight_oracle(n, alpha, k)).epsilon(1e-13));
        }
      }
    }
  }
  CHECK_THROWS_AS(SpaceParams(0, 1.0), PreconditionError);
}

TEST_CASE("weights decrease with alpha termwise") {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int d = 0; d <= 6; ++d) {
      for (const auto& k : enumerate(n, d)) {
        CHECK(weight(SpaceParams(n, 1.5), k) >= weight(SpaceParams(n, 0.5), k));
        CHECK(weight(SpaceParams(n, 0.5), k) >= weight(SpaceParams(n, -1.0), k));
      }
    }
  }
}

TEST_CASE("Bergman weight is the ball integral over n") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int d = 0; d <= 6; ++d) {
      for (const auto& k : enumerate(n, d)) {
        CHECK(weight(SpaceParams(n, -1.0), k) / ball_monomial_integral(k, n) ==
              doctest::Approx(1.0 / n).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("norms") {
  CHECK(norm_sq(SpaceParams(3, 1.5), CoeffSeries::constant(3, 1.0)).value == doctest::Approx(std::pow(3.0, 1.5)));
  const CoeffSeries f(2, {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 0}, -1.0}});
  CHECK(norm_sq(SpaceParams(2, 0.0), f).value == doctest::Approx(1.5));
  const CoeffSeries g = model_polynomial(ModelPolynomialSpec(2, 2));
  CHECK(norm_sq(SpaceParams(2, 0.0), g).value == doctest::Approx(5.0 / 3.0));
  CHECK_FALSE(norm_sq(SpaceParams(2, 0.0), g).last_shell.has_value());
  const NormReport tr = norm_sq(SpaceParams(2, 0.0), g.with_trunc(5));
  REQUIRE(tr.last_shell.has_value());
  CHECK_THROWS_AS(norm_sq(SpaceParams(3, 0.0), g), DimensionMismatch);

  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const auto h = testing::random_poly(3, 4, rng);
    const SpaceParams p(3, 0.7);
    double brute = 0.0;
    for (const auto& [k, c] : h.terms()) brute += weight_oracle(3, 0.7, k) * std::norm(c);
    CHECK(norm_sq(p, h).value == doctest::Approx(brute).epsilon(1e-13));
    CHECK(inner(p, h, h).real() == doctest::Approx(brute).epsilon(1e-13));
  }
}

TEST_CASE("inner product is Hermitian and sesquilinear") {
  std::mt19937_64 rng(22);
  const SpaceParams p(2, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const auto f = testing::random_poly(2, 4, rng);
    const auto g = testing::random_poly(2, 4, rng);
    const Complex a{0.3, -1.2};
    CHECK(std::abs(inner(p, f, g) - std::conj(inner(p, g, f))) < 1e-12);
    CHECK(std::abs(inner(p, scale(f, a), g) - a * inner(p, f, g)) < 1e-12);
    CHECK(std::abs(inner(p, f, scale(g, a)) - std::conj(a) * inner(p, f, g)) < 1e-12);
    // Monomials are orthogonal.
    CHECK(inner(p, CoeffSeries::monomial(MultiIndex{1, 0}), CoeffSeries::monomial(MultiIndex{0, 1})) == Complex{});
  }
}

TEST_CASE("radial derivative scales by degree") {
  const CoeffSeries f(2, {{MultiIndex{0, 0}, 2.0}, {MultiIndex{2, 1}, Complex{1.0, 1.0}}});
  const CoeffSeries r = radial_derivative(f);
  CHECK(r.coeff(MultiIndex{0, 0}) == Complex{});
  CHECK(r.coeff(MultiIndex{2, 1}) == Complex{3.0, 3.0});
}

TEST_CASE("norm relation across parameters") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rep % 2;
    const double alphas[] = {-1.0, 0.0, 1.5, 3.0};
    const SpaceParams p(n, alphas[rep % 4]);
    const auto f = testing::random_poly(n, 6, rng);
    for (int q = 1; q <= 2; ++q) {
      const auto [lhs, rhs] = relation_check(p, f, q);
      CHECK(testing::rel_diff(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("fractional coefficients") {
  CHECK(fractional_coeff(0.3, 0.0, 17, 2) == 1.0);
  CHECK(fractional_coeff(0.3, 1.7, 0, 2) == 1.0);
  // γ = -1, t = 1, n = 2: C = Γ(2)Γ(k+3)/(Γ(3)Γ(k+2)) = (k+2)/2.
  CHECK(fractional_coeff(-1.0, 1.0, 100, 2) == doctest::Approx(51.0).epsilon(1e-13));
  // C(γ,t,k)/k^t -> Γ(n+1+γ)/Γ(n+1+γ+t).
  for (double t : {-0.5, 0.5, 1.5}) {
    const double limit = std::exp(std::lgamma(3.3) - std::lgamma(3.3 + t));
    CHECK(fractional_coeff(0.3, t, 1000000, 2) / std::pow(1e6, t) == doctest::Approx(limit).epsilon(1e-5));
  }
  // t = 1 telescopes to (n+1+k+γ)/(n+1+γ).
  for (int k = 0; k < 50; ++k) {
    CHECK(fractional_coeff(0.25, 1.0, k, 3) == doctest::Approx((4.25 + k) / 4.25).epsilon(1e-13));
  }
  // Composition: C(γ,t1) C(γ+t1,t2) = C(γ,t1+t2).
  for (int k : {1, 5, 40, 300}) {
    const double lhs = fractional_coeff(0.5, 0.7, k, 2) * fractional_coeff(1.2, -0.4, k, 2);
    CHECK(lhs == doctest::Approx(fractional_coeff(0.5, 0.3, k, 2)).epsilon(1e-12));
  }
  // Poles of Γ(n+1+γ) and Γ(n+1+γ+t).
  CHECK_THROWS_AS(fractional_coeff(-3.0, 0.5, 4, 2), PoleError);
  CHECK_THROWS_AS(fractional_coeff(0.0, -4.0, 4, 2), PoleError);

  const CoeffSeries f(2, {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 1}, 2.0}});
  const CoeffSeries g = apply_fractional(0.0, 0.0, f);
  CHECK(g.coeff(MultiIndex{1, 1}) == Complex{2.0});
  const CoeffSeries h = apply_fractional(0.0, 1.0, f);
  CHECK(h.coeff(MultiIndex{1, 1}).real() == doctest::Approx(2.0 * 5.0 / 3.0));
}

TEST_CASE("Hardy norm is the sphere integral") {
  std::mt19937_64 rng(24);
  for (int rep = 0; rep < 5; ++rep) {
    const auto f = testing::random_poly(2, 3, rng);
    const MeanEstimate e = mc_sphere_norm_sq(f, 200000, 100 + rep);
    CHECK(e.agrees_with(norm_sq(SpaceParams(2, 0.0), f).value, 4.0));
  }
  const MeanEstimate e = mc_sphere_norm_sq(model_polynomial(ModelPolynomialSpec(2, 2)), 200000, 7);
  CHECK(e.agrees_with(5.0 / 3.0, 4.0));
}

TEST_CASE("Bergman norm is comparable to the ball integral") {
  std::mt19937_64 rng(25);
  for (int rep = 0; rep < 5; ++rep) {
    const auto f = testing::random_poly(2, 4, rng);
    const double ratio = norm_sq(SpaceParams(2, -1.0), f).value / mc_ball_norm_sq(f, 100000, 200 + rep).mean;
    CHECK(ratio >= 0.25);
    CHECK(ratio <= 4.0);
  }
}

TEST_CASE("integral seminorm is equivalent to the coefficient norm") {
  CHECK(mc_integral_norm(SpaceParams(2, 0.0), CoeffSeries::constant(2, 3.0), 1000, 1).mean == 0.0);
  CHECK_THROWS_AS(mc_integral_norm(SpaceParams(2, 1.0), CoeffSeries::constant(2, 1.0), 10, 1), AlphaOutOfRange);
  CHECK_THROWS_AS(
      mc_integral_norm(SpaceParams(2, 0.0), CoeffSeries::constant(2, 1.0).with_trunc(3), 10, 1),
      PreconditionError);

  const MeanEstimate z1 = mc_integral_norm(SpaceParams(2, 0.0), CoeffSeries::monomial(MultiIndex{1, 0}), 50000, 2);
  CHECK(z1.mean > 0.0);
  CHECK(std::isfinite(z1.mean));

  std::mt19937_64 rng(26);
  const SpaceParams p(2, 0.0);
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = testing::random_poly(2, 3, rng);
    const double semi = norm_sq(p, f).value - std::norm(f.constant_term());
    const double ratio = mc_integral_norm(p, f, 20000, 300 + rep).mean / semi;
    CHECK(ratio >= 1.0 / 20.0);
    CHECK(ratio <= 20.0);
  }
}
