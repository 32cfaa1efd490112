#include "dlab/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "dlab/approximant.hpp"
#include "dlab/capacity.hpp"
#include "dlab/dilation.hpp"
#include "dlab/errors.hpp"
#include "dlab/fit.hpp"
#include "dlab/io.hpp"

namespace dlab {

namespace {

using nlohmann::json;

struct Options {
  std::size_t n = 2;
  double alpha = 0.0;
  std::string poly;
  std::size_t model_m = 0;
  std::string measure;
  int order = 4;
  std::string orders = "2:20";
  std::string r_grid;
  int terms = 4000;
  int degree = 400;
  std::string scheme = "grid";
  std::size_t grid = 0;
  int refinements = 2;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  bool fast = false;
  bool quick = false;
  std::string out;
  std::string format = "csv";
};

json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

json optional_json(const std::optional<double>& x) {
  return x ? number_json(*x) : json(nullptr);
}

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> orders;
  try {
    if (text.find(':') != std::string::npos) {
      std::vector<int> parts;
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ':')) parts.push_back(std::stoi(item));
      if (parts.size() < 2 || parts.size() > 3) throw ParseError("orders must be a:b or a:b:step");
      const int step = parts.size() == 3 ? parts[2] : 1;
      if (step < 1 || parts[0] < 0 || parts[1] < parts[0]) throw ParseError("orders range is empty or invalid");
      for (int k = parts[0]; k <= parts[1]; k += step) orders.push_back(k);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) orders.push_back(std::stoi(item));
    }
  } catch (const std::logic_error&) {
    throw ParseError("cannot parse orders \"" + text + "\"");
  }
  if (orders.empty()) throw ParseError("no orders given");
  return orders;
}

std::vector<double> parse_r_grid(const std::string& text) {
  if (text.empty()) return default_r_grid();
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
  } catch (const std::logic_error&) {
    throw ParseError("cannot parse r grid \"" + text + "\"");
  }
  return grid;
}

std::optional<ModelPolynomialSpec> model_spec(const Options& o) {
  if (o.model_m == 0) return std::nullopt;
  if (o.model_m > o.n) throw PreconditionError("--model-m must not exceed --n");
  return ModelPolynomialSpec(o.n, o.model_m);
}

CoeffSeries load_poly(const Options& o) {
  if (!o.poly.empty() && o.model_m != 0) throw ParseError("give either --poly or --model-m, not both");
  if (!o.poly.empty()) {
    CoeffSeries f = parse_series(read_file(o.poly));
    if (f.dim() != o.n) throw DimensionMismatch("series dim differs from --n");
    return f;
  }
  if (auto spec = model_spec(o)) return model_polynomial(*spec);
  throw ParseError("a polynomial is required: pass --poly FILE or --model-m M");
}

SphereMeasure load_measure(const Options& o) {
  if (!o.measure.empty()) {
    SphereMeasure mu = parse_measure(read_file(o.measure));
    if (mu.n() != o.n) throw DimensionMismatch("measure dimension differs from --n");
    return mu;
  }
  if (auto spec = model_spec(o)) return SphereMeasure::model_torus(spec->n, spec->m);
  throw ParseError("a measure is required: pass --measure FILE or --model-m M");
}

bool want_json(const Options& o) { return o.format == "json"; }

std::string cmd_norm(const Options& o, std::ostream& err) {
  const SpaceParams params(o.n, o.alpha);
  const NormReport r = norm_sq(params, load_poly(o));
  if (r.last_shell) err << "truncated series; last shell contributes " << format_double(*r.last_shell) << "\n";
  if (want_json(o)) {
    return json{{"n", o.n}, {"alpha", o.alpha}, {"norm_sq", r.value}, {"last_shell", optional_json(r.last_shell)}}
               .dump(2) + "\n";
  }
  return format_double(r.value) + "\n";
}

std::string cmd_approximant(const Options& o, std::ostream& err) {
  const SpaceParams params(o.n, o.alpha);
  const ApproximantResult r = solve(params, load_poly(o), o.order);
  err << "order " << r.order << ": dist_sq " << format_double(r.dist_sq) << ", direct "
      << format_double(r.dist_sq_direct) << ", cond " << format_double(r.cond_estimate) << "\n";
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  if (want_json(o)) {
    return json{{"order", r.order},
                {"dist_sq", r.dist_sq},
                {"dist_sq_direct", r.dist_sq_direct},
                {"cond_estimate", number_json(r.cond_estimate)},
                {"regularized", r.regularized},
                {"warnings", r.warnings},
                {"coeffs", json::parse(series_to_json(r.coeffs))}}
               .dump(2) + "\n";
  }
  std::ostringstream csv;
  for (std::size_t i = 0; i < o.n; ++i) csv << "k" << i + 1 << ",";
  csv << "re,im\n";
  for (const auto& [k, c] : r.coeffs.terms()) {
    for (std::size_t i = 0; i < k.dim(); ++i) csv << k[i] << ",";
    csv << format_double(c.real()) << "," << format_double(c.imag()) << "\n";
  }
  return csv.str();
}

std::vector<DecayRow> fast_decay_rows(const SpaceParams& params, const ModelPolynomialSpec& spec,
                                      const std::vector<int>& orders) {
  const DiagonalSpec diag = DiagonalSpec::model(spec.n, spec.m);
  // In the lifted variable the model polynomial is 1 - λ μ^{-1/4} w.
  const OneVarSeries tilde{{1.0, -spec.lambda() * std::pow(diag.mu(), -0.25)}, diag.mu()};
  std::vector<DecayRow> rows(orders.size());
  parallel_for(orders.size(), [&](std::size_t i) {
    rows[i].order = orders[i];
    rows[i].dist_sq = diagonal_fast_path(params, diag, tilde, orders[i]).dist_sq;
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double prev = rows[i - 1].dist_sq;
    const double cur = rows[i].dist_sq;
    if (prev > 0.0 && cur > 0.0 && rows[i].order != rows[i - 1].order) {
      rows[i].running_slope = (std::log(cur) - std::log(prev)) /
                              (std::log(rows[i].order + 1.0) - std::log(rows[i - 1].order + 1.0));
    }
  }
  return rows;
}

std::string cmd_decay(const Options& o, std::ostream& err) {
  const SpaceParams params(o.n, o.alpha);
  const std::vector<int> orders = parse_orders(o.orders);
  const auto spec = model_spec(o);
  std::vector<DecayRow> rows;
  if (o.fast) {
    if (!spec) throw ParseError("--fast requires --model-m");
    rows = fast_decay_rows(params, *spec, orders);
  } else {
    rows = decay_sweep(params, load_poly(o), orders);
  }

  json fit_json = nullptr;
  if (rows.size() >= 10) {
    if (spec) {
      const double beta = beta_of_alpha(o.alpha, o.n, spec->m);
      if (beta <= 1.0) {
        const DecayFit fit = fit_decay(rows, beta);
        fit_json = {{"beta", beta},
                    {"points", fit.points},
                    {"slope", optional_json(fit.slope)},
                    {"target", optional_json(fit.target)},
                    {"product_mean", optional_json(fit.product_mean)},
                    {"product_spread", optional_json(fit.product_spread)}};
        if (fit.slope) {
          err << "fitted slope " << format_double(*fit.slope) << " (target " << format_double(*fit.target)
              << ", beta " << format_double(beta) << ")\n";
        } else {
          err << "dist_sq*log(N+1) mean " << format_double(*fit.product_mean) << ", spread "
              << format_double(*fit.product_spread) << " (beta 1)\n";
        }
      } else {
        err << "beta " << format_double(beta) << " > 1: no decay profile to fit\n";
      }
    } else {
      std::vector<double> x, y;
      for (std::size_t i = rows.size() / 2; i < rows.size(); ++i) {
        if (rows[i].dist_sq <= 0.0) continue;
        x.push_back(std::log(rows[i].order + 1.0));
        y.push_back(std::log(rows[i].dist_sq));
      }
      if (x.size() >= 2) {
        const LineFit line = fit_line(x, y);
        fit_json = {{"slope", line.slope}, {"points", line.points}};
        err << "fitted slope " << format_double(line.slope) << "\n";
      }
    }
  } else {
    err << "fewer than 10 orders: slope fit skipped\n";
  }

  if (want_json(o)) {
    json jr = json::array();
    for (const auto& r : rows) {
      jr.push_back({{"N", r.order}, {"dist_sq", r.dist_sq}, {"running_slope", optional_json(r.running_slope)}});
    }
    return json{{"rows", jr}, {"fit", fit_json}}.dump(2) + "\n";
  }
  std::ostringstream csv;
  csv << "N,dist_sq,fitted_running_slope\n";
  for (const auto& r : rows) {
    csv << r.order << "," << format_double(r.dist_sq) << ","
        << (r.running_slope ? format_double(*r.running_slope) : "") << "\n";
  }
  return csv.str();
}

std::string cmd_dilate(const Options& o, std::ostream& err) {
  const std::vector<double> grid = parse_r_grid(o.r_grid);
  std::vector<double> norms;
  std::optional<double> alpha0;
  if (auto spec = model_spec(o)) {
    if (!o.poly.empty()) throw ParseError("give either --poly or --model-m, not both");
    alpha0 = dilation_threshold(*spec);
    norms = dilation_sweep(*spec, o.alpha, grid).norms;
  } else {
    const CoeffSeries p = load_poly(o);
    for (double r : grid) {
      const QuotientNorm q = general_quotient_norm_sq(p, o.alpha, r, o.degree);
      norms.push_back(q.value);
      if (q.tail_indicator > 1e-6 * q.value) {
        err << "warning: r=" << format_double(r) << " last shell carries " << format_double(q.tail_indicator)
            << "; raise --degree\n";
      }
    }
  }
  std::optional<BoundednessVerdict> verdict;
  if (grid.size() >= 4) {
    DilationSweep sweep;
    sweep.alpha = o.alpha;
    sweep.r_grid = grid;
    sweep.norms = norms;
    verdict = boundedness_verdict(sweep);
    err << "fitted exponent " << format_double(verdict->exponent) << ": "
        << (verdict->bounded ? "bounded" : "unbounded") << "\n";
  }
  if (want_json(o)) {
    json jr = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      jr.push_back({{"r", grid[i]}, {"one_minus_r", 1.0 - grid[i]}, {"norm_sq", norms[i]}});
    }
    json j{{"alpha", o.alpha}, {"alpha0", optional_json(alpha0)}, {"rows", jr}};
    if (verdict) {
      j["exponent"] = verdict->exponent;
      j["bounded"] = verdict->bounded;
      j["note"] = verdict->note;
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream csv;
  csv << "r,one_minus_r,norm_sq\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv << format_double(grid[i]) << "," << format_double(1.0 - grid[i]) << "," << format_double(norms[i]) << "\n";
  }
  return csv.str();
}

json cauchy_json(const CauchyVerdict& v) {
  return {{"verdict", to_string(v.verdict)},
          {"rho", number_json(v.rho)},
          {"partial_sum", v.partial_sum},
          {"sum_estimate", optional_json(v.sum_estimate)},
          {"note", v.note}};
}

std::string cmd_cauchy(const Options& o, std::ostream& err) {
  const SphereMeasure mu = load_measure(o);
  const std::vector<double> terms = mu.as_torus()
                                        ? cauchy_norm_terms(moments(mu, o.terms), o.n, o.alpha, o.terms)
                                        : cauchy_norm_terms_pairwise(*mu.as_cloud(), o.alpha, o.terms);
  const CauchyVerdict v = cauchy_convergence_verdict(terms);
  err << to_string(v.verdict) << " (rho " << format_double(v.rho) << ")\n";
  if (want_json(o)) {
    json j = cauchy_json(v);
    j["terms"] = terms.size();
    return j.dump(2) + "\n";
  }
  std::ostringstream csv;
  csv << "k,T_k\n";
  for (std::size_t k = 0; k < terms.size(); ++k) csv << k << "," << format_double(terms[k]) << "\n";
  return csv.str();
}

EnergyScheme energy_scheme(const Options& o) {
  if (o.scheme == "grid") return TorusGridScheme{o.grid, o.refinements};
  if (o.scheme == "mc") return MonteCarloScheme{o.samples, o.seed};
  throw ParseError("--scheme must be grid or mc");
}

json energy_json(const EnergyEstimate& e) {
  json levels = json::array();
  for (double v : e.refinements) levels.push_back(number_json(v));
  return {{"finite", e.finite},
          {"value", number_json(e.value)},
          {"error", number_json(e.error)},
          {"refinements", levels},
          {"level_points", e.level_points},
          {"note", e.note}};
}

std::string cmd_energy(const Options& o, std::ostream& err) {
  const EnergyEstimate e = riesz_energy(load_measure(o), o.alpha, o.n, energy_scheme(o));
  err << (e.finite ? "finite" : "infinite") << ": " << e.note << "\n";
  if (want_json(o)) return energy_json(e).dump(2) + "\n";
  std::ostringstream csv;
  csv << "level,points,energy\n";
  for (std::size_t i = 0; i < e.refinements.size(); ++i) {
    csv << i << "," << (i < e.level_points.size() ? std::to_string(e.level_points[i]) : "") << ","
        << format_double(e.refinements[i]) << "\n";
  }
  return csv.str();
}

std::string cmd_certificate(const Options& o, std::ostream& err) {
  Options poly_opts = o;
  if (!o.poly.empty()) poly_opts.model_m = 0;
  const CoeffSeries f = load_poly(poly_opts);
  const SphereMeasure mu = load_measure(o);
  CertificateOptions opts;
  opts.cauchy_terms = o.terms;
  opts.grid = TorusGridScheme{o.grid, o.refinements};
  opts.monte_carlo = MonteCarloScheme{o.samples, o.seed};
  const CertificateReport r = noncyclicity_certificate(f, mu, SpaceParams(o.n, o.alpha), opts);
  err << to_string(r.verdict) << ": " << r.reason << "\n";
  json j{{"verdict", to_string(r.verdict)},
         {"reason", r.reason},
         {"support_check", r.support_check},
         {"support_ok", r.support_ok},
         {"energy", r.energy ? energy_json(*r.energy) : json(nullptr)},
         {"cauchy", cauchy_json(r.cauchy)}};
  return j.dump(2) + "\n";
}

void add_space(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.n, "Dimension n of the ball B_n")->check(CLI::Range(1, 8))->capture_default_str();
  sub->add_option("--alpha", o.alpha, "Space parameter alpha of D_alpha(B_n)")->capture_default_str();
}

void add_poly(CLI::App* sub, Options& o) {
  sub->add_option("--poly", o.poly, "Series JSON file for f");
  sub->add_option("--model-m", o.model_m, "Use the model polynomial 1 - m^{m/2} z_1...z_m")
      ->check(CLI::Range(1, 8));
}

void add_measure(CLI::App* sub, Options& o) {
  sub->add_option("--measure", o.measure, "Measure JSON file (model_torus or point_cloud)");
}

void add_output(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Write the table or report to this file instead of stdout");
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_energy_scheme(CLI::App* sub, Options& o) {
  sub->add_option("--grid", o.grid, "Torus grid nodes per angle at the coarsest level (0: automatic)")
      ->capture_default_str();
  sub->add_option("--refinements", o.refinements, "Torus grid refinements, each x4 nodes per angle")
      ->check(CLI::Range(2, 6))
      ->capture_default_str();
  sub->add_option("--samples", o.samples, "Monte Carlo pair samples")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Numerical laboratory for Dirichlet-type spaces D_alpha(B_n)", "dlab"};
  app.set_help_all_flag("--help-all", "Print help for every subcommand");
  app.require_subcommand(1);

  auto* norm = app.add_subcommand("norm", "Squared D_alpha norm of a series");
  add_space(norm, o);
  add_poly(norm, o);
  add_output(norm, o);

  auto* approx = app.add_subcommand("approximant", "Optimal polynomial approximant to 1/f of order N");
  add_space(approx, o);
  add_poly(approx, o);
  approx->add_option("--order", o.order, "Order N (per-variable degree bound)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_output(approx, o);

  auto* decay = app.add_subcommand("decay", "Sweep dist^2(1, f P_N) over orders and fit the decay");
  add_space(decay, o);
  add_poly(decay, o);
  decay->add_option("--orders", o.orders, "Orders as a:b, a:b:step or a comma list")->capture_default_str();
  decay->add_flag("--fast", o.fast, "Use the one-variable diagonal reduction (needs --model-m)");
  add_output(decay, o);

  auto* dilate = app.add_subcommand("dilate", "Norms of p/p_r over radii and the divergence exponent");
  add_space(dilate, o);
  add_poly(dilate, o);
  dilate->add_option("--r-grid", o.r_grid, "Comma-separated radii (default 0.9,0.99,0.999,0.9999)");
  dilate->add_option("--degree", o.degree, "Truncation degree for --poly quotients")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_output(dilate, o);

  auto* cauchy = app.add_subcommand("cauchy", "Cauchy-transform norm series in D_{-alpha} and its verdict");
  add_space(cauchy, o);
  add_measure(cauchy, o);
  cauchy->add_option("--model-m", o.model_m, "Use the model torus measure for this m")->check(CLI::Range(1, 8));
  cauchy->add_option("--terms", o.terms, "Number of series terms K")->check(CLI::Range(20, 1000000))->capture_default_str();
  add_output(cauchy, o);

  auto* energy = app.add_subcommand("energy", "Riesz alpha-energy of a measure on the sphere");
  add_space(energy, o);
  add_measure(energy, o);
  energy->add_option("--model-m", o.model_m, "Use the model torus measure for this m")->check(CLI::Range(1, 8));
  energy->add_option("--scheme", o.scheme, "Quadrature: grid (model torus) or mc")
      ->check(CLI::IsMember({"grid", "mc"}))
      ->capture_default_str();
  add_energy_scheme(energy, o);
  add_output(energy, o);

  auto* cert = app.add_subcommand("certificate", "Non-cyclicity certificate for f against a measure");
  add_space(cert, o);
  add_poly(cert, o);
  add_measure(cert, o);
  cert->add_option("--terms", o.terms, "Cauchy series terms K")->check(CLI::Range(20, 1000000))->capture_default_str();
  add_energy_scheme(cert, o);
  cert->add_option("--out", o.out, "Write the JSON report to this file instead of stdout");

  auto* verify = app.add_subcommand("verify", "Run the built-in invariant suite");
  verify->add_flag("--quick", o.quick, "Smaller sizes for a fast smoke run");

  std::vector<std::string> argv_store{"dlab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (verify->parsed()) {
      const VerifyReport r = run_verify(o.quick, out);
      out << "verify: " << r.passed << " passed, " << r.failed << " failed\n";
      return r.failed == 0 ? kExitOk : kExitVerifyFailed;
    }
    std::string text;
    if (norm->parsed()) text = cmd_norm(o, err);
    if (approx->parsed()) text = cmd_approximant(o, err);
    if (decay->parsed()) text = cmd_decay(o, err);
    if (dilate->parsed()) text = cmd_dilate(o, err);
    if (cauchy->parsed()) text = cmd_cauchy(o, err);
    if (energy->parsed()) text = cmd_energy(o, err);
    if (cert->parsed()) text = cmd_certificate(o, err);
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw ParseError("cannot write " + o.out);
      file << text;
    }
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace dlab
