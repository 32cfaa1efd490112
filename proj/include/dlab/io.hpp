#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "dlab/capacity.hpp"
#include "dlab/series.hpp"

namespace dlab {

/// {"dim": n, "trunc": D|null, "terms": [{"k": [...], "re": x, "im": y}, ...]}
/// Unknown fields, wrong types and malformed JSON raise ParseError.
CoeffSeries parse_series(std::string_view text);
std::string series_to_json(const CoeffSeries& f);

/// {"kind": "model_torus", "n": n, "m": m} or
/// {"kind": "point_cloud", "points": [[[re, im], ...], ...], "weights": [...]}
SphereMeasure parse_measure(std::string_view text);
std::string measure_to_json(const SphereMeasure& mu);

/// Reads a whole file; ParseError when it cannot be opened.
std::string read_file(const std::string& path);

/// Shortest round-trip decimal form of x ("inf", "-inf", "nan" for non-finite).
std::string format_double(double x);

}  // namespace dlab
