#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "dlab/multiindex.hpp"

namespace dlab {

using Point = std::vector<std::complex<double>>;
using Rng = std::mt19937_64;

/// Mean of a sample together with its standard error.
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;

  /// |mean - value| <= sigmas * std_error.
  bool agrees_with(double value, double sigmas = 3.0) const;
};

/// Welford accumulator; merge() combines partial results in a fixed order.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);
  MeanEstimate estimate() const;
  std::size_t count() const { return count_; }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Uniform point on S_n: n standard complex Gaussians, normalized.
Point sample_sphere(std::size_t n, Rng& rng);
/// Uniform point in B_n for the normalized volume measure: a sphere point
/// scaled by a radius with density 2n ε^{2n-1}.
Point sample_ball(std::size_t n, Rng& rng);

/// |z^k|² for a point z.
double monomial_abs_sq(const Point& z, const MultiIndex& k);
double norm_sq(const Point& z);

/// Thread count from DIRICHLET_LAB_THREADS, else hardware concurrency (>= 1).
unsigned worker_threads();

/// Runs body(i) for i in [0, count) over worker_threads() threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Estimates the mean of `integrand` over `samples` draws of `sampler`.
///
/// Samples are split into fixed-size chunks with one seeded stream per chunk,
/// so the estimate depends only on (seed, samples), never on thread count.
MeanEstimate mc_mean(std::size_t samples, std::uint64_t seed,
                     const std::function<Point(Rng&)>& sampler,
                     const std::function<double(const Point&)>& integrand);

/// Estimates several integrands over one shared sample stream.
std::vector<MeanEstimate> mc_mean_many(
    std::size_t samples, std::uint64_t seed, const std::function<Point(Rng&)>& sampler,
    const std::function<void(const Point&, std::vector<double>&)>& integrands, std::size_t width);

}  // namespace dlab
