#include "dlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>

#include "dlab/errors.hpp"

namespace dlab {

namespace {

using nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

void require_object(const json& j, std::string_view what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be a JSON object");
}

void allow_only(const json& j, std::initializer_list<std::string_view> keys, std::string_view what) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) throw ParseError(std::string(what) + ": unknown field \"" + key + "\"");
  }
}

const json& field(const json& j, const char* key, std::string_view what) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

double number(const json& j, std::string_view what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

long long integer(const json& j, std::string_view what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return j.get<long long>();
}

const json& array(const json& j, std::string_view what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  return j;
}

Complex complex_pair(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("complex entries are [re, im] pairs");
  return {number(j[0], "re"), number(j[1], "im")};
}

}  // namespace

CoeffSeries parse_series(std::string_view text) {
  const json j = parse_json(text);
  require_object(j, "series");
  allow_only(j, {"dim", "trunc", "terms"}, "series");
  const long long dim = integer(field(j, "dim", "series"), "dim");
  if (dim < 1 || dim > static_cast<long long>(kMaxDim)) {
    throw ParseError("dim must lie in [1, " + std::to_string(kMaxDim) + "]");
  }
  std::optional<int> trunc;
  const json& tj = field(j, "trunc", "series");
  if (!tj.is_null()) {
    const long long t = integer(tj, "trunc");
    if (t < 0) throw ParseError("trunc must be non-negative or null");
    trunc = static_cast<int>(t);
  }
  CoeffSeries::Terms terms;
  for (const json& term : array(field(j, "terms", "series"), "terms")) {
    require_object(term, "term");
    allow_only(term, {"k", "re", "im"}, "term");
    const json& kj = array(field(term, "k", "term"), "k");
    if (static_cast<long long>(kj.size()) != dim) throw ParseError("term exponent length differs from dim");
    std::vector<int> k;
    for (const json& e : kj) {
      const long long v = integer(e, "exponent");
      if (v < 0 || v > 1'000'000) throw ParseError("exponents must lie in [0, 1e6]");
      k.push_back(static_cast<int>(v));
    }
    const MultiIndex idx{std::span<const int>(k)};
    const Complex c{number(field(term, "re", "term"), "re"), number(field(term, "im", "term"), "im")};
    if (!terms.emplace(idx, c).second) throw ParseError("duplicate exponent in series terms");
  }
  return CoeffSeries(static_cast<std::size_t>(dim), std::move(terms), trunc);
}

std::string series_to_json(const CoeffSeries& f) {
  json j;
  j["dim"] = f.dim();
  j["trunc"] = f.trunc_degree() ? json(*f.trunc_degree()) : json(nullptr);
  json terms = json::array();
  for (const auto& [k, c] : f.terms()) {
    json kj = json::array();
    for (std::size_t i = 0; i < k.dim(); ++i) kj.push_back(k[i]);
    terms.push_back({{"k", kj}, {"re", c.real()}, {"im", c.imag()}});
  }
  j["terms"] = std::move(terms);
  return j.dump();
}

SphereMeasure parse_measure(std::string_view text) {
  const json j = parse_json(text);
  require_object(j, "measure");
  const json& kind = field(j, "kind", "measure");
  if (!kind.is_string()) throw ParseError("measure kind must be a string");
  if (kind == "model_torus") {
    allow_only(j, {"kind", "n", "m"}, "model_torus");
    const long long n = integer(field(j, "n", "model_torus"), "n");
    const long long m = integer(field(j, "m", "model_torus"), "m");
    if (n < 1 || n > static_cast<long long>(kMaxDim) || m < 1 || m > n) {
      throw ParseError("model_torus requires 1 <= m <= n <= " + std::to_string(kMaxDim));
    }
    return SphereMeasure::model_torus(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  }
  if (kind == "point_cloud") {
    allow_only(j, {"kind", "points", "weights"}, "point_cloud");
    std::vector<Point> points;
    for (const json& p : array(field(j, "points", "point_cloud"), "points")) {
      Point z;
      for (const json& c : array(p, "point")) z.push_back(complex_pair(c));
      points.push_back(std::move(z));
    }
    std::vector<double> weights;
    for (const json& w : array(field(j, "weights", "point_cloud"), "weights")) {
      weights.push_back(number(w, "weight"));
    }
    try {
      return SphereMeasure::point_cloud(std::move(points), std::move(weights));
    } catch (const PreconditionError& e) {
      throw ParseError(std::string("invalid point cloud: ") + e.what());
    }
  }
  throw ParseError("unknown measure kind \"" + kind.get<std::string>() + "\"");
}

std::string measure_to_json(const SphereMeasure& mu) {
  json j;
  if (const auto* t = mu.as_torus()) {
    j = {{"kind", "model_torus"}, {"n", t->n}, {"m", t->m}};
  } else {
    const PointCloud& cloud = *mu.as_cloud();
    json points = json::array();
    for (const Point& p : cloud.points) {
      json pj = json::array();
      for (const Complex& c : p) pj.push_back({c.real(), c.imag()});
      points.push_back(std::move(pj));
    }
    j = {{"kind", "point_cloud"}, {"points", points}, {"weights", cloud.weights}};
  }
  return j.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace dlab
