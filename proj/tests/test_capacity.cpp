#include <doctest.h>

#include <cstdlib>
#include <numbers>

#include "dlab/capacity.hpp"
#include "dlab/errors.hpp"
#include "support.hpp"

using namespace dlab;

namespace {

SphereMeasure random_cloud(std::size_t n, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<Point> pts;
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    pts.push_back(sample_sphere(n, rng));
    w.push_back(u(rng));
    total += w.back();
  }
  for (auto& x : w) x /= total;
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) partial += w[i];
  w.back() = 1.0 - partial;
  return SphereMeasure::point_cloud(std::move(pts), std::move(w));
}

}  // namespace

TEST_CASE("measure validation") {
  CHECK_THROWS_AS(SphereMeasure::model_torus(2, 3), PreconditionError);
  CHECK_THROWS_AS(SphereMeasure::point_cloud({{0.5, 0.0}}, {1.0}), PreconditionError);
  CHECK_THROWS_AS(SphereMeasure::point_cloud({{1.0, 0.0}}, {0.9}), PreconditionError);
  CHECK_THROWS_AS(SphereMeasure::point_cloud({{1.0, 0.0}, {1.0}}, {0.5, 0.5}), DimensionMismatch);
  CHECK(SphereMeasure::point_cloud({{1.0, 0.0}}, {1.0}).n() == 2);
  CHECK(SphereMeasure::model_torus(3, 2).n() == 3);
}

TEST_CASE("model torus moments") {
  const MomentTable t1 = moments(SphereMeasure::model_torus(2, 1), 6);
  CHECK(t1.exact);
  for (int l = 0; l <= 6; ++l) CHECK(t1.moments.at(MultiIndex{l, 0}) == Complex{1.0});
  CHECK(t1.moments.count(MultiIndex{1, 1}) == 0);

  const MomentTable t2 = moments(SphereMeasure::model_torus(2, 2), 8);
  for (int l = 0; l <= 4; ++l) CHECK(t2.moments.at(MultiIndex{l, l}).real() == doctest::Approx(std::pow(2.0, -l)));
  CHECK(t2.moments.size() == 5);

  // Torus integral oracle: trapezoid rule over θ is exact for trigonometric polynomials.
  const ModelPolynomialSpec spec(3, 3);
  const MomentTable t3 = moments(SphereMeasure::model_torus(3, 3), 6);
  for (int d = 0; d <= 6; ++d) {
    for (const auto& j : enumerate(3, d)) {
      Complex s{};
      const int grid = 16;
      for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
          const auto z = spec.zero_set_point({2 * std::numbers::pi * a / grid, 2 * std::numbers::pi * b / grid});
          Complex mono = 1.0;
          for (std::size_t i = 0; i < 3; ++i) mono *= std::pow(z[i], j[i]);
          s += mono;
        }
      }
      s /= grid * grid;
      const auto it = t3.moments.find(j);
      const Complex exact = it == t3.moments.end() ? Complex{} : it->second;
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
}

TEST_CASE("sampled torus moments converge at the Monte Carlo rate") {
  for (std::size_t count : {1000u, 10000u, 100000u}) {
    const MomentTable t = moments(sample_model_torus(2, 2, count, 17), 2);
    // ζ_1ζ_2 = 1/2 at every sample, so the (1,1) moment carries no sampling error.
    CHECK(std::abs(t.moments.at(MultiIndex{1, 1}) - 0.5) < 1e-12);
    // (2,0) has mean 0 and per-sample standard deviation 1/2.
    CHECK(std::abs(t.moments.at(MultiIndex{2, 0})) < 4.0 * 0.5 / std::sqrt(static_cast<double>(count)));
  }
}

TEST_CASE("moment symmetry for clouds") {
  const SphereMeasure mu = random_cloud(2, 30, 5);
  const MomentTable t = moments(mu, 6);
  CHECK_FALSE(t.exact);
  for (const auto& [j, v] : t.moments) CHECK(std::abs(t.conj_moments.at(j) - std::conj(v)) < 1e-12);
}

TEST_CASE("Cauchy terms for the model measures") {
  const MomentTable t1 = moments(SphereMeasure::model_torus(2, 1), 50);
  const auto terms1 = cauchy_norm_terms(t1, 2, 1.3, 50);
  for (int k = 0; k <= 50; ++k) CHECK(terms1[static_cast<std::size_t>(k)] == doctest::Approx(std::pow(k + 1.0, -0.3)));

  const MomentTable t2 = moments(SphereMeasure::model_torus(2, 2), 4000);
  const auto terms2 = cauchy_norm_terms(t2, 2, 1.0, 4000);
  for (int l = 1; l <= 2000; l *= 3) {
    const double exact = std::exp(std::lgamma(2 * l + 1.0) - 2 * std::lgamma(l + 1.0) - l * std::log(4.0));
    CHECK(terms2[static_cast<std::size_t>(2 * l)] == doctest::Approx(exact).epsilon(1e-10));
    CHECK(terms2[static_cast<std::size_t>(2 * l - 1)] == 0.0);
    // Stirling: (2l)!/(l!)² 4^{-l} ≈ (πl)^{-1/2}.
    CHECK(terms2[static_cast<std::size_t>(2 * l)] * std::sqrt(std::numbers::pi * l) == doctest::Approx(1.0).epsilon(0.2 / l));
  }

  MomentTable empty;
  empty.n = 2;
  empty.max_degree = 30;
  for (double v : cauchy_norm_terms(empty, 2, 1.0, 30)) CHECK(v == 0.0);
  CHECK_THROWS_AS(cauchy_norm_terms(t1, 2, 1.0, 60), PreconditionError);
}

TEST_CASE("moment route and pairwise route agree") {
  for (std::size_t n : {2u, 3u}) {
    const SphereMeasure mu = random_cloud(n, 12, 40 + n);
    const int k = 10;
    const auto a = cauchy_norm_terms(moments(mu, k), n, 0.7, k);
    const auto b = cauchy_norm_terms_pairwise(*mu.as_cloud(), 0.7, k);
    for (int i = 0; i <= k; ++i) {
      CHECK(a[static_cast<std::size_t>(i)] == doctest::Approx(b[static_cast<std::size_t>(i)]).epsilon(1e-10));
    }
  }
}

TEST_CASE("convergence verdicts") {
  std::vector<double> fast(400), slow(400);
  for (std::size_t k = 0; k < 400; ++k) {
    fast[k] = std::pow(k + 1.0, -2.0);
    slow[k] = std::pow(k + 1.0, -0.5);
  }
  const auto f = cauchy_convergence_verdict(fast);
  CHECK(f.verdict == SeriesVerdict::Converges);
  CHECK(f.rho == doctest::Approx(-2.0).epsilon(0.005));
  REQUIRE(f.sum_estimate.has_value());
  CHECK(*f.sum_estimate == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-3));
  CHECK(cauchy_convergence_verdict(slow).verdict == SeriesVerdict::Diverges);
  CHECK_THROWS_AS(cauchy_convergence_verdict(std::vector<double>(10, 1.0)), InsufficientData);

  const MomentTable t = moments(SphereMeasure::model_torus(2, 1), 4000);
  const auto conv = cauchy_convergence_verdict(cauchy_norm_terms(t, 2, 2.25, 4000));
  CHECK(conv.verdict == SeriesVerdict::Converges);
  CHECK(conv.rho == doctest::Approx(-1.25).epsilon(1e-3));
  const auto div = cauchy_convergence_verdict(cauchy_norm_terms(t, 2, 1.75, 4000));
  CHECK(div.verdict == SeriesVerdict::Diverges);
  CHECK(div.rho == doctest::Approx(-0.75).epsilon(1e-3));
  CHECK(cauchy_convergence_verdict(cauchy_norm_terms(t, 2, 2.0, 4000)).verdict == SeriesVerdict::Indeterminate);
}

TEST_CASE("Cauchy threshold for two model measures") {
  for (const auto& [n, m] : {std::pair<std::size_t, std::size_t>{2, 1}, {2, 2}}) {
    const CauchyThreshold t = locate_cauchy_threshold(n, m, 2000);
    const double alpha0 = (2.0 * n + 1.0 - m) / 2.0;
    CHECK(t.diverges_until < t.converges_from);
    CHECK(std::abs(t.flip - alpha0) < 0.1);
  }
}

TEST_CASE("Riesz kernel") {
  CHECK(riesz_kernel(1.0, 2.0, 2) == 1.0);
  CHECK(riesz_kernel(1.0, 1.3, 2) == 1.0);
  CHECK(std::isinf(riesz_kernel(0.0, 1.3, 2)));
  CHECK(riesz_kernel(0.25, 1.5, 2) == doctest::Approx(2.0));
  CHECK(riesz_kernel(std::exp(-1.0), 3.0, 3) == doctest::Approx(2.0));
  CHECK_THROWS_AS(riesz_kernel(0.5, 0.0, 2), AlphaOutOfRange);
  CHECK_THROWS_AS(riesz_kernel(0.5, 2.5, 2), AlphaOutOfRange);
}

TEST_CASE("Riesz energy of model measures") {
  const SphereMeasure point = SphereMeasure::model_torus(2, 1);
  CHECK_FALSE(riesz_energy(point, 1.0, 2, TorusGridScheme{}).finite);
  CHECK_FALSE(riesz_energy(point, 2.0, 2, MonteCarloScheme{}).finite);

  const SphereMeasure torus = SphereMeasure::model_torus(2, 2);
  const EnergyEstimate finite = riesz_energy(torus, 1.75, 2, TorusGridScheme{1024, 2});
  CHECK(finite.finite);
  REQUIRE(finite.refinements.size() == 3);
  CHECK(std::abs(finite.refinements[1] / finite.refinements[0] - 1.0) < 0.05);
  CHECK(std::abs(finite.refinements[2] / finite.refinements[1] - 1.0) < 0.05);
  const EnergyEstimate infinite = riesz_energy(torus, 1.25, 2, TorusGridScheme{1024, 2});
  CHECK_FALSE(infinite.finite);
  CHECK(infinite.refinements[2] / infinite.refinements[1] >= 2.0);

  // One-dimensional oracle: (1/2π)∫|1 - cos δ|^{α-2} dδ by midpoint rule on a
  // substituted variable δ = π s^4 that removes the endpoint singularity.
  const double alpha = 1.9;
  double oracle = 0.0;
  const int steps = 200000;
  for (int i = 0; i < steps; ++i) {
    const double s = (i + 0.5) / steps;
    const double delta = std::numbers::pi * std::pow(s, 4);
    const double jac = 4.0 * std::numbers::pi * std::pow(s, 3);
    const double half = std::sin(0.5 * delta);
    oracle += std::pow(2.0 * half * half, alpha - 2.0) * jac;
  }
  oracle = oracle / steps / std::numbers::pi;
  const EnergyEstimate grid = riesz_energy(torus, alpha, 2, TorusGridScheme{});
  CHECK(grid.finite);
  CHECK(grid.value == doctest::Approx(oracle).epsilon(1e-3));
  const EnergyEstimate mc = riesz_energy(torus, alpha, 2, MonteCarloScheme{200000, 3});
  CHECK(std::abs(mc.value - oracle) < 4.0 * mc.error);
}

TEST_CASE("energy finiteness flips near the threshold") {
  for (const auto& [n, m] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}, {3, 3}}) {
    const double alpha0 = (2.0 * n + 1.0 - m) / 2.0;
    const SphereMeasure mu = SphereMeasure::model_torus(n, m);
    CHECK(riesz_energy(mu, alpha0 + 0.15, n, TorusGridScheme{}).finite);
    CHECK_FALSE(riesz_energy(mu, alpha0 - 0.15, n, TorusGridScheme{}).finite);
  }
}

TEST_CASE("point cloud energies") {
  // Two orthogonal atoms: |1 - ⟨ζ,η⟩| = 1, so the energy over distinct pairs is 1.
  const SphereMeasure two = SphereMeasure::point_cloud({{1.0, 0.0}, {0.0, 1.0}}, {0.5, 0.5});
  const EnergyEstimate e = riesz_energy(two, 1.0, 2, MonteCarloScheme{});
  CHECK(e.finite);
  CHECK(e.value == doctest::Approx(1.0));
  CHECK_THROWS_AS(riesz_energy(two, 1.0, 2, TorusGridScheme{}), PreconditionError);

  const SphereMeasure cloud = random_cloud(2, 500, 8);
  const EnergyEstimate exact = riesz_energy(cloud, 1.9, 2, MonteCarloScheme{1000000, 1});
  const EnergyEstimate sampled = riesz_energy(cloud, 1.9, 2, MonteCarloScheme{20000, 1});
  CHECK(exact.error == 0.0);
  CHECK(std::abs(sampled.value - exact.value) < 5.0 * sampled.error);
}

TEST_CASE("Monte Carlo energy does not depend on the thread count") {
  const SphereMeasure torus = SphereMeasure::model_torus(3, 3);
  setenv("DIRICHLET_LAB_THREADS", "1", 1);
  const double one = riesz_energy(torus, 2.5, 3, MonteCarloScheme{50000, 9}).value;
  setenv("DIRICHLET_LAB_THREADS", "4", 1);
  const double four = riesz_energy(torus, 2.5, 3, MonteCarloScheme{50000, 9}).value;
  unsetenv("DIRICHLET_LAB_THREADS");
  CHECK(one == four);
}

TEST_CASE("certificates") {
  CertificateOptions opts;
  const auto yes = noncyclicity_certificate(model_polynomial(ModelPolynomialSpec(2, 1)), SphereMeasure::model_torus(2, 1),
                                            SpaceParams(2, 2.25), opts);
  CHECK(yes.verdict == CertificateVerdict::NonCyclic);
  CHECK(yes.support_ok);
  CHECK_FALSE(yes.energy.has_value());

  const auto diverging = noncyclicity_certificate(model_polynomial(ModelPolynomialSpec(2, 2)),
                                                  SphereMeasure::model_torus(2, 2), SpaceParams(2, 1.4), opts);
  CHECK(diverging.verdict == CertificateVerdict::Inconclusive);
  CHECK(diverging.support_ok);
  REQUIRE(diverging.energy.has_value());
  CHECK_FALSE(diverging.energy->finite);

  for (double alpha : {0.5, 1.6, 2.5}) {
    const auto r = noncyclicity_certificate(CoeffSeries::constant(2, 1.0), SphereMeasure::model_torus(2, 2),
                                            SpaceParams(2, alpha), opts);
    CHECK_FALSE(r.support_ok);
    CHECK(r.support_check == doctest::Approx(1.0));
    CHECK(r.verdict == CertificateVerdict::Inconclusive);
  }
  CHECK_THROWS_AS(noncyclicity_certificate(CoeffSeries::constant(2, 1.0), SphereMeasure::model_torus(2, 2),
                                           SpaceParams(2, -0.5), opts),
                  AlphaOutOfRange);

  // A cloud on the zero set of 1 - 2 z_1 z_2 past the threshold.
  const SphereMeasure cloud = sample_model_torus(2, 2, 64, 3);
  opts.cauchy_terms = 400;
  const auto c = noncyclicity_certificate(model_polynomial(ModelPolynomialSpec(2, 2)), cloud, SpaceParams(2, 1.9), opts);
  CHECK(c.support_ok);
}
