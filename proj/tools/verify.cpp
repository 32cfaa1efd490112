#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>

#include "dlab/approximant.hpp"
#include "dlab/capacity.hpp"
#include "dlab/cli.hpp"
#include "dlab/dilation.hpp"
#include "dlab/io.hpp"

namespace dlab {

namespace {

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string on success, else the failure detail
};

CoeffSeries random_poly(std::size_t n, int degree, Rng& rng) {
  std::normal_distribution<double> g;
  CoeffSeries::Terms terms;
  for (int d = 0; d <= degree; ++d) {
    for (const MultiIndex& k : enumerate(n, d)) {
      if (rng() % 2 == 0) terms.emplace(k, Complex{g(rng), g(rng)});
    }
  }
  terms[MultiIndex::zero(n)] = Complex{1.0 + std::abs(g(rng)), 0.0};
  return CoeffSeries(n, std::move(terms));
}

CoeffSeries abs_coeffs(const CoeffSeries& f) {
  CoeffSeries::Terms terms;
  for (const auto& [k, c] : f.terms()) terms.emplace(k, std::abs(c));
  return CoeffSeries(f.dim(), std::move(terms), f.trunc_degree());
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

std::vector<Check> checks(bool quick) {
  const int reps = quick ? 10 : 100;
  std::vector<Check> out;

  out.push_back({"norm identity ||nf+Rf||_{a-2} = ||f||_a", [reps] {
                   Rng rng(11);
                   for (int i = 0; i < reps; ++i) {
                     const std::size_t n = 2 + i % 2;
                     const double alphas[] = {-1.0, 0.0, 1.5, 3.0};
                     const SpaceParams p(n, alphas[i % 4]);
                     const auto [lhs, rhs] = relation_check(p, random_poly(n, 6, rng), 1);
                     if (rel_err(lhs, rhs) > 1e-12) return "relative error " + format_double(rel_err(lhs, rhs));
                   }
                   return std::string();
                 }});

  out.push_back({"reciprocal(p) * p = 1 through the truncation degree", [reps] {
                   Rng rng(12);
                   for (int i = 0; i < reps; ++i) {
                     const CoeffSeries p = random_poly(2, 3, rng);
                     const CoeffSeries g = reciprocal(p, 12);
                     const CoeffSeries prod = mul(p, g);
                     // Rounding in the k-th coefficient scales with Σ|p_j||g_{k-j}|.
                     const CoeffSeries bound = mul(abs_coeffs(p), abs_coeffs(g));
                     for (const auto& [k, c] : prod.terms()) {
                       const Complex want = k.degree() == 0 ? 1.0 : 0.0;
                       if (std::abs(c - want) > 1e-12 * std::max(1.0, bound.coeff(k).real())) {
                         return "coefficient at degree " + std::to_string(k.degree()) + " off by " +
                                format_double(std::abs(c - want));
                       }
                     }
                   }
                   return std::string();
                 }});

  out.push_back({"lift/project round trip", [] {
                   const DiagonalSpec spec = DiagonalSpec::model(3, 2);
                   const OneVarSeries f{{1.0, Complex{0.5, -0.25}, 2.0, Complex{0.0, 3.0}}, spec.mu()};
                   const OneVarSeries back = project(lift(f, spec), spec);
                   for (std::size_t l = 0; l < f.coeffs.size(); ++l) {
                     if (std::abs(back.coeffs[l] - f.coeffs[l]) > 4e-16 * std::abs(f.coeffs[l])) {
                       return "coefficient " + std::to_string(l) + " changed";
                     }
                   }
                   return std::string();
                 }});

  out.push_back({"approximant residual orthogonal to f*P_N", [] {
                   const SpaceParams params(2, 1.0);
                   const CoeffSeries f = CoeffSeries(2, {{MultiIndex{0, 0}, 1.0}, {MultiIndex{1, 0}, -0.8},
                                                         {MultiIndex{1, 1}, 0.3}});
                   const ApproximantResult r = solve(params, f, 3);
                   const CoeffSeries residual = sub(mul(r.coeffs, f), CoeffSeries::constant(2, 1.0));
                   for (const MultiIndex& j : enumerate_box(2, 3)) {
                     const Complex ip = inner(params, residual, mul(CoeffSeries::monomial(j), f));
                     if (std::abs(ip) > 1e-9) return "inner product " + format_double(std::abs(ip));
                   }
                   if (!r.distances_agree(std::pow(2.0, params.alpha))) return std::string("dist_sq paths disagree");
                   return std::string();
                 }});

  out.push_back({"dilation exact series matches truncated quotient", [] {
                   for (std::size_t m = 1; m <= 2; ++m) {
                     const ModelPolynomialSpec spec(2, m);
                     const double exact = quotient_norm_sq(spec, 1.0, 0.5);
                     const QuotientNorm q = general_quotient_norm_sq(model_polynomial(spec), 1.0, 0.5, 160);
                     if (rel_err(exact, q.value) > 1e-10) return "relative gap " + format_double(rel_err(exact, q.value));
                   }
                   return std::string();
                 }});

  out.push_back({"factorial inequality, exhaustive", [quick] {
                   const int kmax = quick ? 4 : 6;
                   for (std::size_t n = 1; n <= 4; ++n) {
                     for (int k = 0; k <= kmax; ++k) {
                       for (const MultiIndex& j : enumerate(n, static_cast<int>(n) * k)) {
                         if (!factorial_inequality_check(j, k)) return "fails at |j| = " + std::to_string(j.degree());
                       }
                     }
                   }
                   return std::string();
                 }});

  out.push_back({"Cauchy verdicts on both sides of the model threshold", [quick] {
                   const int terms = quick ? 1000 : 4000;
                   const MomentTable t = moments(SphereMeasure::model_torus(2, 1), terms);
                   const auto below = cauchy_convergence_verdict(cauchy_norm_terms(t, 2, 1.5, terms));
                   const auto above = cauchy_convergence_verdict(cauchy_norm_terms(t, 2, 2.5, terms));
                   if (below.verdict != SeriesVerdict::Diverges) return "alpha=1.5 gave " + to_string(below.verdict);
                   if (above.verdict != SeriesVerdict::Converges) return "alpha=2.5 gave " + to_string(above.verdict);
                   return std::string();
                 }});

  out.push_back({"certificate never fires for a non-vanishing f", [] {
                   CertificateOptions opts;
                   opts.cauchy_terms = 400;
                   const auto r = noncyclicity_certificate(CoeffSeries::constant(2, 1.0),
                                                           SphereMeasure::model_torus(2, 1), SpaceParams(2, 2.25), opts);
                   if (r.verdict != CertificateVerdict::Inconclusive) return std::string("certificate fired");
                   return std::string();
                 }});

  out.push_back({"sphere monomial integrals by Monte Carlo", [quick] {
                   const std::size_t samples = quick ? 20000 : 200000;
                   const MultiIndex k{2, 1};
                   const MeanEstimate e = mc_sphere_norm_sq(CoeffSeries::monomial(k), samples, 7);
                   const double exact = sphere_monomial_integral(k, 2);
                   if (!e.agrees_with(exact, 4.0)) return "estimate " + format_double(e.mean) + " vs " + format_double(exact);
                   return std::string();
                 }});

  return out;
}

}  // namespace

VerifyReport run_verify(bool quick, std::ostream& out) {
  VerifyReport report;
  for (const Check& c : checks(quick)) {
    std::string detail;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    if (detail.empty()) {
      ++report.passed;
      out << "PASS " << c.name << "\n";
    } else {
      ++report.failed;
      out << "FAIL " << c.name << ": " << detail << "\n";
    }
  }
  return report;
}

}  // namespace dlab
