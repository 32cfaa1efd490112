#include "dlab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dlab/errors.hpp"
#include "dlab/fit.hpp"

namespace dlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_alpha(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha <= static_cast<double>(n))) {
    throw AlphaOutOfRange("alpha must lie in (0, n] = (0, " + std::to_string(n) + "], got " +
                          std::to_string(alpha));
  }
}

Complex sphere_inner(const Point& a, const Point& b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

Point torus_point(const ModelTorus& t, const std::vector<double>& angles) {
  return ModelPolynomialSpec(t.n, t.m).zero_set_point(angles);
}

Point random_torus_point(const ModelTorus& t, Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> angles(t.m - 1);
  for (auto& a : angles) a = angle(rng);
  return torus_point(t, angles);
}

// Calls body(index tuple) for every tuple in {0..N-1}^dims.
template <typename Body>
void for_each_grid_point(std::size_t dims, std::size_t per_axis, Body&& body) {
  std::vector<std::size_t> idx(dims, 0);
  while (true) {
    body(idx);
    std::size_t pos = dims;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < per_axis) break;
      idx[pos] = 0;
      if (pos == 0) return;
    }
    if (dims == 0) return;
  }
}

// Energy of the torus measure on an N^{m-1} product grid. The uniform grid is
// a subgroup of the torus and the kernel depends only on angle differences,
// so the N^{2(m-1)} product sum with diagonal cells removed equals N^{m-1}
// times the sum over nonzero differences.
double torus_grid_energy(const ModelTorus& t, double alpha, std::size_t per_axis) {
  const std::size_t dims = t.m - 1;
  const double inv_m = 1.0 / static_cast<double>(t.m);
  std::vector<Complex> roots(per_axis);
  for (std::size_t j = 0; j < per_axis; ++j) {
    roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                   static_cast<double>(per_axis));
  }
  double sum = 0.0;
  double carry = 0.0;
  for_each_grid_point(dims, per_axis, [&](const std::vector<std::size_t>& idx) {
    std::size_t total = 0;
    bool diagonal = true;
    Complex inner{};
    for (std::size_t i = 0; i < dims; ++i) {
      inner += roots[idx[i]];
      total += idx[i];
      diagonal = diagonal && idx[i] == 0;
    }
    if (diagonal) return;
    inner += std::conj(roots[total % per_axis]);
    const double dist = std::abs(1.0 - inner * inv_m);
    const double y = riesz_kernel(dist, alpha, t.n) - carry;
    const double s = sum + y;
    carry = (s - sum) - y;
    sum = s;
  });
  return sum / std::pow(static_cast<double>(per_axis), static_cast<double>(dims));
}

}  // namespace

SphereMeasure SphereMeasure::model_torus(std::size_t n, std::size_t m) {
  ModelPolynomialSpec(n, m);  // validates 1 <= m <= n
  return SphereMeasure(ModelTorus{n, m});
}

SphereMeasure SphereMeasure::point_cloud(std::vector<Point> points, std::vector<double> weights) {
  if (points.empty()) throw PreconditionError("point cloud must contain at least one point");
  if (points.size() != weights.size()) throw PreconditionError("points and weights differ in length");
  const std::size_t n = points.front().size();
  if (n == 0 || n > kMaxDim) throw PreconditionError("point dimension out of range");
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n) throw DimensionMismatch("point cloud mixes dimensions");
    if (std::abs(std::sqrt(norm_sq(points[i])) - 1.0) > 1e-10) {
      throw PreconditionError("point cloud point is not on the unit sphere");
    }
    if (!(weights[i] >= 0.0)) throw PreconditionError("point cloud weights must be non-negative");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw PreconditionError("point cloud weights must sum to 1");
  return SphereMeasure(PointCloud{std::move(points), std::move(weights)});
}

std::size_t SphereMeasure::n() const {
  if (const auto* t = as_torus()) return t->n;
  return as_cloud()->points.front().size();
}

SphereMeasure sample_model_torus(std::size_t n, std::size_t m, std::size_t count,
                                 std::uint64_t seed) {
  const ModelTorus t{n, m};
  ModelPolynomialSpec(n, m);
  Rng rng(seed);
  std::vector<Point> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) points.push_back(random_torus_point(t, rng));
  std::vector<double> weights(count, 1.0 / static_cast<double>(count));
  // Equal weights may miss 1 by rounding; renormalize the last entry.
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) partial += weights[i];
  if (count > 0) weights.back() = 1.0 - partial;
  return SphereMeasure::point_cloud(std::move(points), std::move(weights));
}

MomentTable moments(const SphereMeasure& mu, int max_degree) {
  if (max_degree < 0) throw PreconditionError("moments: max degree must be non-negative");
  MomentTable table;
  table.n = mu.n();
  table.max_degree = max_degree;
  if (const auto* t = mu.as_torus()) {
    // μ*(j) vanishes off the diagonal l·(1,...,1,0,...,0) and equals m^{-ml/2} on it.
    table.exact = true;
    const ModelPolynomialSpec spec(t->n, t->m);
    const MultiIndex u = spec.diagonal_unit();
    const double m = static_cast<double>(t->m);
    for (int l = 0; l * static_cast<int>(t->m) <= max_degree; ++l) {
      const double log_v = -0.5 * m * l * std::log(m);
      table.moments.emplace(l * u, std::exp(log_v));
      table.conj_moments.emplace(l * u, std::exp(log_v));
      table.log_abs_conj.emplace(l * u, log_v);
    }
    return table;
  }
  const PointCloud& cloud = *mu.as_cloud();
  const std::size_t n = table.n;
  // powers[p][i][e] = ζ_{p,i}^e
  std::vector<std::vector<std::vector<Complex>>> powers(cloud.points.size());
  for (std::size_t p = 0; p < cloud.points.size(); ++p) {
    powers[p].assign(n, std::vector<Complex>(static_cast<std::size_t>(max_degree) + 1));
    for (std::size_t i = 0; i < n; ++i) {
      Complex v = 1.0;
      for (int e = 0; e <= max_degree; ++e) {
        powers[p][i][static_cast<std::size_t>(e)] = v;
        v *= cloud.points[p][i];
      }
    }
  }
  for (int d = 0; d <= max_degree; ++d) {
    for (const MultiIndex& j : enumerate(n, d)) {
      Complex s{}, sc{};
      for (std::size_t p = 0; p < cloud.points.size(); ++p) {
        Complex mono = 1.0, mono_conj = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const Complex z = powers[p][i][static_cast<std::size_t>(j[i])];
          mono *= z;
          mono_conj *= std::conj(z);
        }
        s += cloud.weights[p] * mono;
        sc += cloud.weights[p] * mono_conj;
      }
      table.moments.emplace(j, s);
      table.conj_moments.emplace(j, sc);
      table.log_abs_conj.emplace(j, std::log(std::abs(sc)));
    }
  }
  return table;
}

std::vector<double> cauchy_norm_terms(const MomentTable& table, std::size_t n, double alpha,
                                      int max_k) {
  if (max_k < 0) throw PreconditionError("cauchy_norm_terms: K must be non-negative");
  if (max_k > table.max_degree) throw PreconditionError("moment table degree is below K");
  if (table.n != n) throw DimensionMismatch("moment table dimension differs from n");
  std::vector<double> terms(static_cast<std::size_t>(max_k) + 1, 0.0);
  const double exponent = static_cast<double>(n) - 1.0 - alpha;
  for (const auto& [j, log_abs] : table.log_abs_conj) {
    const int k = j.degree();
    if (k > max_k || std::isinf(log_abs)) continue;
    terms[static_cast<std::size_t>(k)] +=
        std::exp(exponent * std::log(k + 1.0) + log_factorial(k) - log_factorial(j) + 2.0 * log_abs);
  }
  return terms;
}

std::vector<double> cauchy_norm_terms_pairwise(const PointCloud& cloud, double alpha, int max_k) {
  if (max_k < 0) throw PreconditionError("cauchy_norm_terms_pairwise: K must be non-negative");
  const std::size_t count = cloud.points.size();
  const double n = static_cast<double>(cloud.points.front().size());
  const std::size_t len = static_cast<std::size_t>(max_k) + 1;
  std::vector<std::vector<double>> per_row(count, std::vector<double>(len, 0.0));
  parallel_for(count, [&](std::size_t a) {
    for (std::size_t b = 0; b < count; ++b) {
      const Complex z = sphere_inner(cloud.points[b], cloud.points[a]);
      const double w = cloud.weights[a] * cloud.weights[b];
      Complex power = 1.0;
      for (std::size_t k = 0; k < len; ++k) {
        per_row[a][k] += w * power.real();
        power *= z;
      }
    }
  });
  std::vector<double> terms(len, 0.0);
  for (std::size_t k = 0; k < len; ++k) {
    double s = 0.0;
    for (std::size_t a = 0; a < count; ++a) s += per_row[a][k];
    terms[k] = std::pow(static_cast<double>(k) + 1.0, n - 1.0 - alpha) * std::max(0.0, s);
  }
  return terms;
}

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::Converges: return "Converges";
    case SeriesVerdict::Diverges: return "Diverges";
    case SeriesVerdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

CauchyVerdict cauchy_convergence_verdict(const std::vector<double>& terms,
                                         std::optional<std::size_t> first) {
  if (terms.size() < 20) throw InsufficientData("cauchy verdict needs at least 20 terms");
  const std::size_t begin = first.value_or(terms.size() / 2);
  if (begin + 2 > terms.size()) throw InsufficientData("cauchy verdict window is too short");

  CauchyVerdict v;
  auto partial = [&](std::size_t upto) {
    double s = 0.0;
    for (std::size_t k = 0; k < upto && k < terms.size(); ++k) s += terms[k];
    return s;
  };
  v.partial_sum = partial(terms.size());

  std::vector<double> x, y;
  for (std::size_t k = begin; k < terms.size(); ++k) {
    if (terms[k] > 0.0) {
      x.push_back(std::log(static_cast<double>(k) + 1.0));
      y.push_back(std::log(terms[k]));
    }
  }
  if (x.empty()) {
    v.verdict = SeriesVerdict::Converges;
    v.rho = -kInf;
    v.sum_estimate = v.partial_sum;
    v.note = "all terms in the window vanish";
    return v;
  }
  if (x.size() < 2) throw InsufficientData("cauchy verdict needs two nonzero terms in the window");
  const LineFit line = fit_line(x, y);
  v.rho = line.slope;

  const std::size_t len = terms.size();
  const double early = partial(len / 2) - partial(len / 4);
  const double late = v.partial_sum - partial(len / 2);
  if (v.rho < -1.0 - kRhoMargin && late < early) {
    v.verdict = SeriesVerdict::Converges;
    const double density = static_cast<double>(x.size()) / static_cast<double>(len - begin);
    const double tail = density * std::exp(line.intercept) *
                        std::pow(static_cast<double>(len), v.rho + 1.0) / (-v.rho - 1.0);
    v.sum_estimate = v.partial_sum + tail;
    v.note = "terms decay faster than (k+1)^-1";
  } else if (v.rho > -1.0 + kRhoMargin) {
    v.verdict = SeriesVerdict::Diverges;
    v.note = "terms decay no faster than (k+1)^rho with rho > -1";
  } else {
    v.verdict = SeriesVerdict::Indeterminate;
    v.note = "rho is within the margin of -1; raise the number of terms";
  }
  return v;
}

CauchyThreshold locate_cauchy_threshold(std::size_t n, std::size_t m, int terms, double tolerance) {
  const SphereMeasure mu = SphereMeasure::model_torus(n, m);
  const MomentTable table = moments(mu, terms);
  const double alpha0 = (2.0 * static_cast<double>(n) + 1.0 - static_cast<double>(m)) / 2.0;
  auto verdict = [&](double alpha) {
    return cauchy_convergence_verdict(cauchy_norm_terms(table, n, alpha, terms)).verdict;
  };
  auto bisect = [&](auto&& below) {
    double lo = alpha0 - 1.0;
    double hi = alpha0 + 1.0;
    if (!below(lo) || below(hi)) {
      throw Error("locate_cauchy_threshold: verdict does not change within alpha0 +- 1");
    }
    while (hi - lo > tolerance) {
      const double mid = 0.5 * (lo + hi);
      (below(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  CauchyThreshold out;
  out.diverges_until = bisect([&](double a) { return verdict(a) == SeriesVerdict::Diverges; });
  out.converges_from = bisect([&](double a) { return verdict(a) != SeriesVerdict::Converges; });
  out.flip = 0.5 * (out.diverges_until + out.converges_from);
  return out;
}

double riesz_kernel(double t, double alpha, std::size_t n) {
  require_alpha(alpha, n);
  if (t < 0.0) throw PreconditionError("riesz_kernel requires t >= 0");
  if (t == 0.0) return kInf;
  const double nd = static_cast<double>(n);
  if (alpha < nd) return std::pow(t, alpha - nd);
  return 1.0 - std::log(t);
}

std::size_t default_torus_grid_points(std::size_t m) {
  switch (m) {
    case 0:
    case 1: return 1;
    case 2: return 1024;
    case 3: return 64;
    default: return 8;
  }
}

EnergyEstimate riesz_energy(const SphereMeasure& mu, double alpha, std::size_t n,
                            const EnergyScheme& scheme) {
  require_alpha(alpha, n);
  if (mu.n() != n) throw DimensionMismatch("riesz_energy: measure dimension differs from n");
  EnergyEstimate out;

  if (const auto* grid = std::get_if<TorusGridScheme>(&scheme)) {
    const auto* t = mu.as_torus();
    if (!t) throw PreconditionError("torus grid quadrature requires a model torus measure");
    if (t->m == 1) {
      out.finite = false;
      out.value = kInf;
      out.note = "point mass: the kernel is infinite on the diagonal";
      return out;
    }
    if (grid->refinements < 2) throw PreconditionError("torus grid needs at least 2 refinements");
    std::size_t points = grid->points ? grid->points : default_torus_grid_points(t->m);
    for (int level = 0; level <= grid->refinements; ++level) {
      out.level_points.push_back(points);
      out.refinements.push_back(torus_grid_energy(*t, alpha, points));
      points *= 4;
    }
    const std::size_t last = out.refinements.size() - 1;
    const double d1 = out.refinements[last - 1] - out.refinements[last - 2];
    const double d2 = out.refinements[last] - out.refinements[last - 1];
    const double q = d1 != 0.0 ? d2 / d1 : 0.0;
    // Finite energy shows as differences contracting geometrically under refinement.
    if (std::abs(d2) <= 0.9 * std::abs(d1) || d2 == 0.0) {
      out.finite = true;
      const double correction = d2 == 0.0 ? 0.0 : d2 * q / (1.0 - q);
      out.value = out.refinements[last] + correction;
      out.error = std::abs(correction);
      out.note = "refinement differences contract by " + std::to_string(q);
    } else {
      out.finite = false;
      out.value = kInf;
      out.note = "refinement differences do not contract (ratio " + std::to_string(q) +
                 "); growth " + std::to_string(out.refinements[last] / out.refinements[last - 1]) +
                 "x per refinement";
    }
    return out;
  }

  const auto& mc = std::get<MonteCarloScheme>(scheme);
  if (const auto* cloud = mu.as_cloud()) {
    const std::size_t count = cloud->points.size();
    if (count < 2) {
      out.finite = false;
      out.value = kInf;
      out.note = "single atom: the kernel is infinite on the diagonal";
      return out;
    }
    if (count * (count - 1) <= mc.samples) {
      // Exact U-statistic over all distinct pairs.
      double num = 0.0, den = 0.0;
      for (std::size_t a = 0; a < count; ++a) {
        for (std::size_t b = 0; b < count; ++b) {
          if (a == b) continue;
          const double w = cloud->weights[a] * cloud->weights[b];
          const double k = riesz_kernel(std::abs(1.0 - sphere_inner(cloud->points[a], cloud->points[b])),
                                        alpha, n);
          if (std::isinf(k) && w > 0.0) {
            out.finite = false;
            out.value = kInf;
            out.note = "two distinct atoms coincide";
            return out;
          }
          num += w * k;
          den += w;
        }
      }
      out.finite = true;
      out.value = den > 0.0 ? num / den : 0.0;
      out.refinements = {out.value};
      out.note = "exact U-statistic over all distinct pairs";
      return out;
    }
  }

  // Random pairs; the sampler returns the two points concatenated.
  std::function<Point(Rng&)> sampler;
  if (const auto* t = mu.as_torus()) {
    if (t->m == 1) {
      out.finite = false;
      out.value = kInf;
      out.note = "point mass: the kernel is infinite on the diagonal";
      return out;
    }
    sampler = [t](Rng& rng) {
      Point pair = random_torus_point(*t, rng);
      const Point second = random_torus_point(*t, rng);
      pair.insert(pair.end(), second.begin(), second.end());
      return pair;
    };
  } else {
    const PointCloud* cloud = mu.as_cloud();
    sampler = [cloud](Rng& rng) {
      std::discrete_distribution<std::size_t> pick(cloud->weights.begin(), cloud->weights.end());
      const std::size_t a = pick(rng);
      std::size_t b = pick(rng);
      while (b == a) b = pick(rng);
      Point pair = cloud->points[a];
      pair.insert(pair.end(), cloud->points[b].begin(), cloud->points[b].end());
      return pair;
    };
  }
  const MeanEstimate est = mc_mean(mc.samples, mc.seed, sampler, [n, alpha](const Point& pair) {
    const Point a(pair.begin(), pair.begin() + static_cast<std::ptrdiff_t>(n));
    const Point b(pair.begin() + static_cast<std::ptrdiff_t>(n), pair.end());
    return riesz_kernel(std::abs(1.0 - sphere_inner(a, b)), alpha, n);
  });
  out.finite = std::isfinite(est.mean);
  out.value = out.finite ? est.mean : kInf;
  out.error = out.finite ? est.std_error : kInf;
  out.refinements = {out.value};
  out.note = "Monte Carlo over random pairs; heavy tails mean a finite sample cannot prove finiteness";
  return out;
}

std::string to_string(CertificateVerdict v) {
  return v == CertificateVerdict::NonCyclic ? "NonCyclic" : "Inconclusive";
}

CertificateReport noncyclicity_certificate(const CoeffSeries& f, const SphereMeasure& mu,
                                           const SpaceParams& params,
                                           const CertificateOptions& options) {
  if (!(params.alpha > 0.0)) throw AlphaOutOfRange("certificate requires alpha > 0");
  if (!f.is_polynomial()) throw PreconditionError("certificate requires a polynomial f");
  if (f.dim() != params.n || mu.n() != params.n) {
    throw DimensionMismatch("certificate: f, measure and space dimensions differ");
  }
  CertificateReport report;

  if (const auto* t = mu.as_torus()) {
    const std::size_t dims = t->m - 1;
    std::size_t per_axis = options.support_points_per_angle;
    if (dims > 0) {
      const auto cap = static_cast<std::size_t>(std::floor(std::pow(4096.0, 1.0 / dims) + 1e-9));
      per_axis = std::max<std::size_t>(1, std::min(per_axis, cap));
    } else {
      per_axis = 1;
    }
    for_each_grid_point(dims, per_axis, [&](const std::vector<std::size_t>& idx) {
      std::vector<double> angles(dims);
      for (std::size_t i = 0; i < dims; ++i) {
        angles[i] = 2.0 * std::numbers::pi * static_cast<double>(idx[i]) / static_cast<double>(per_axis);
      }
      report.support_check = std::max(report.support_check, std::abs(evaluate(f, torus_point(*t, angles))));
    });
  } else {
    for (const auto& p : mu.as_cloud()->points) {
      report.support_check = std::max(report.support_check, std::abs(evaluate(f, p)));
    }
  }
  report.support_ok = report.support_check < kSupportTolerance;

  if (params.alpha <= static_cast<double>(params.n)) {
    if (mu.as_torus()) {
      report.energy = riesz_energy(mu, params.alpha, params.n, options.grid);
    } else {
      report.energy = riesz_energy(mu, params.alpha, params.n, options.monte_carlo);
    }
  }

  const std::vector<double> terms =
      mu.as_torus()
          ? cauchy_norm_terms(moments(mu, options.cauchy_terms), params.n, params.alpha,
                              options.cauchy_terms)
          : cauchy_norm_terms_pairwise(*mu.as_cloud(), params.alpha, options.cauchy_terms);
  report.cauchy = cauchy_convergence_verdict(terms);

  if (!report.support_ok) {
    report.reason = "f does not vanish on the support of the measure";
  } else if (report.cauchy.verdict != SeriesVerdict::Converges) {
    report.reason = "Cauchy transform series is not shown to converge in D_{-alpha}";
  } else {
    report.verdict = CertificateVerdict::NonCyclic;
    report.reason = "f vanishes on supp(mu) and the Cauchy transform lies in D_{-alpha}";
  }
  return report;
}

}  // namespace dlab
