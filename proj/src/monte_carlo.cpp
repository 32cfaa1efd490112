#include "dlab/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace dlab {

namespace {

constexpr std::size_t kChunk = 1 << 14;

Rng chunk_rng(std::uint64_t seed, std::size_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return Rng(seq);
}

}  // namespace

bool MeanEstimate::agrees_with(double value, double sigmas) const {
  return std::abs(mean - value) <= sigmas * std_error;
}

void RunningStats::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(count_ + other.count_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.count_) / total;
  m2_ += other.m2_ + delta * delta * static_cast<double>(count_) *
                         static_cast<double>(other.count_) / total;
  count_ += other.count_;
}

MeanEstimate RunningStats::estimate() const {
  MeanEstimate e;
  e.mean = mean_;
  e.count = count_;
  if (count_ > 1) {
    const double var = m2_ / static_cast<double>(count_ - 1);
    e.std_error = std::sqrt(var / static_cast<double>(count_));
  }
  return e;
}

Point sample_sphere(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Point z(n);
  double s = 0.0;
  do {
    s = 0.0;
    for (auto& c : z) {
      c = {gauss(rng), gauss(rng)};
      s += std::norm(c);
    }
  } while (s == 0.0);
  const double inv = 1.0 / std::sqrt(s);
  for (auto& c : z) c *= inv;
  return z;
}

Point sample_ball(std::size_t n, Rng& rng) {
  Point z = sample_sphere(n, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double radius = std::pow(unif(rng), 1.0 / (2.0 * static_cast<double>(n)));
  for (auto& c : z) c *= radius;
  return z;
}

double monomial_abs_sq(const Point& z, const MultiIndex& k) {
  double v = 1.0;
  for (std::size_t i = 0; i < k.dim(); ++i) {
    const double a = std::norm(z[i]);
    for (int e = 0; e < k[i]; ++e) v *= a;
  }
  return v;
}

double norm_sq(const Point& z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return s;
}

unsigned worker_threads() {
  if (const char* env = std::getenv("DIRICHLET_LAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t threads = std::min<std::size_t>(worker_threads(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) body(i);
    });
  }
}

MeanEstimate mc_mean(std::size_t samples, std::uint64_t seed,
                     const std::function<Point(Rng&)>& sampler,
                     const std::function<double(const Point&)>& integrand) {
  auto many = mc_mean_many(
      samples, seed, sampler,
      [&](const Point& z, std::vector<double>& out) { out[0] = integrand(z); }, 1);
  return many.front();
}

std::vector<MeanEstimate> mc_mean_many(
    std::size_t samples, std::uint64_t seed, const std::function<Point(Rng&)>& sampler,
    const std::function<void(const Point&, std::vector<double>&)>& integrands, std::size_t width) {
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::vector<RunningStats>> partial(chunks, std::vector<RunningStats>(width));
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng = chunk_rng(seed, c);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(samples, begin + kChunk);
    std::vector<double> values(width);
    for (std::size_t s = begin; s < end; ++s) {
      const Point z = sampler(rng);
      integrands(z, values);
      for (std::size_t w = 0; w < width; ++w) partial[c][w].add(values[w]);
    }
  });
  std::vector<RunningStats> total(width);
  for (const auto& chunk : partial) {
    for (std::size_t w = 0; w < width; ++w) total[w].merge(chunk[w]);
  }
  std::vector<MeanEstimate> out;
  out.reserve(width);
  for (const auto& t : total) out.push_back(t.estimate());
  return out;
}

}  // namespace dlab
