#include <doctest.h>

#include "dlab/dilation.hpp"
#include "dlab/errors.hpp"
#include "support.hpp"

using namespace dlab;

TEST_CASE("exact quotient coefficients") {
  const ModelPolynomialSpec spec(2, 2);
  const auto c0 = model_quotient_coeffs(spec, 0.0, 4);
  CHECK(c0[0] == 1.0);
  CHECK(c0[1] == -2.0);
  for (int k = 2; k <= 4; ++k) CHECK(c0[static_cast<std::size_t>(k)] == 0.0);

  // Against series arithmetic: p · reciprocal(p_r).
  for (const ModelPolynomialSpec s : {ModelPolynomialSpec(2, 1), ModelPolynomialSpec(2, 2), ModelPolynomialSpec(3, 3)}) {
    const double r = 0.6;
    const int terms = 8;
    const auto c = model_quotient_coeffs(s, r, terms);
    const CoeffSeries q = mul(model_polynomial(s), reciprocal(dilate(model_polynomial(s), r), terms * static_cast<int>(s.m)));
    const MultiIndex u = s.diagonal_unit();
    for (int k = 0; k <= terms; ++k) {
      CHECK(std::abs(q.coeff(k * u) - c[static_cast<std::size_t>(k)]) < 1e-12 * std::max(1.0, std::abs(c[static_cast<std::size_t>(k)])));
    }
    CHECK(q.size() == static_cast<std::size_t>(terms) + 1);
  }
}

TEST_CASE("diagonal weight matches the general weight") {
  const ModelPolynomialSpec spec(3, 2);
  for (int k = 0; k < 30; ++k) {
    CHECK(std::exp(log_diagonal_weight(spec, 1.3, k)) ==
          doctest::Approx(weight(SpaceParams(3, 1.3), k * spec.diagonal_unit())).epsilon(1e-12));
  }
}

TEST_CASE("exact and truncated quotient norms agree") {
  for (const ModelPolynomialSpec s : {ModelPolynomialSpec(2, 1), ModelPolynomialSpec(2, 2), ModelPolynomialSpec(3, 2)}) {
    for (double r : {0.0, 0.3, 0.6}) {
      const double exact = quotient_norm_sq(s, 1.0, r);
      const QuotientNorm q = general_quotient_norm_sq(model_polynomial(s), 1.0, r, 240);
      CHECK(testing::rel_diff(exact, q.value) < 1e-10);
      CHECK(q.tail_indicator < 1e-20);
    }
  }
  // r = 0 gives p itself.
  const ModelPolynomialSpec s(2, 2);
  CHECK(quotient_norm_sq(s, 0.0, 0.0) == doctest::Approx(5.0 / 3.0));
  CHECK(general_quotient_norm_sq(CoeffSeries::constant(2, 1.0), 0.7, 0.9, 10).value ==
        doctest::Approx(std::pow(2.0, 0.7)));
  CHECK_THROWS_AS(quotient_norm_sq(s, 1.0, 1.0), PreconditionError);
}

TEST_CASE("norms stay bounded at the threshold") {
  const ModelPolynomialSpec s(2, 1);
  const double a = quotient_norm_sq(s, 2.0, 0.9);
  const double b = quotient_norm_sq(s, 2.0, 0.99);
  const double c = quotient_norm_sq(s, 2.0, 0.999);
  CHECK(b / a < 1.1);
  CHECK(std::abs(c / b - 1.0) < std::abs(b / a - 1.0));
}

TEST_CASE("boundedness verdicts") {
  const ModelPolynomialSpec s(3, 2);
  CHECK(dilation_threshold(s) == 2.5);
  const auto at = boundedness_verdict(dilation_sweep(s, 2.5));
  CHECK(at.bounded);
  CHECK(at.exponent < kBoundedSlope);
  const auto above = boundedness_verdict(dilation_sweep(s, 3.0));
  CHECK_FALSE(above.bounded);
  // Squared norms grow like (1-r)^{-(α-α₀)}; over 1-r in [1e-4, 1e-1] the
  // fitted slope is still well below that asymptote.
  CHECK(above.exponent > kBoundedSlope);
  CHECK(above.exponent < 0.5);

  DilationSweep flat;
  flat.r_grid = default_r_grid();
  flat.norms.assign(4, 7.0);
  const auto v = boundedness_verdict(flat);
  CHECK(v.bounded);
  CHECK(v.exponent == doctest::Approx(0.0));
}

TEST_CASE("local slope approaches alpha - alpha0") {
  const ModelPolynomialSpec s(2, 2);
  const double alpha = dilation_threshold(s) + 0.5;
  auto local = [&](double e1, double e2) {
    const double n1 = quotient_norm_sq(s, alpha, 1.0 - e1, 1e-9);
    const double n2 = quotient_norm_sq(s, alpha, 1.0 - e2, 1e-9);
    return (std::log(n2) - std::log(n1)) / (std::log(e1) - std::log(e2));
  };
  const double coarse = local(1e-2, 1e-3);
  const double fine = local(1e-4, 1e-5);
  CHECK(coarse < fine);
  CHECK(fine == doctest::Approx(0.5).epsilon(0.15));
}

TEST_CASE("fit preconditions") {
  CHECK_THROWS_AS(fit_dilation_exponent({0.9, 0.99, 0.999}, {1, 2, 3}), InsufficientData);
  CHECK_THROWS_AS(fit_dilation_exponent({0.9, 0.92, 0.94, 0.96}, {1, 2, 3, 4}), InsufficientData);
  CHECK_THROWS_AS(fit_dilation_exponent({0.99, 0.9, 0.999, 0.9999}, {1, 2, 3, 4}), PreconditionError);
  CHECK_THROWS_AS(fit_dilation_exponent({0.9, 0.99}, {1, 2, 3}), PreconditionError);
}

TEST_CASE("threshold search brackets") {
  const ModelPolynomialSpec s(2, 1);
  CHECK_THROWS_AS(locate_dilation_threshold(s, 0.0, 1.0), Error);
  const double t = locate_dilation_threshold(s, 1.0, 4.0);
  CHECK(t > dilation_threshold(s));
  CHECK(t < dilation_threshold(s) + 0.6);
}
