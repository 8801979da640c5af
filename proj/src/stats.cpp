#include "regqa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace regqa {

namespace {

void check_projection(const Projection& points) {
  if (points.x.size() != points.y.size())
    throw std::invalid_argument("projection columns differ in length");
}

}  // namespace

std::optional<double> pearson_r(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("pearson_r: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("pearson_r: need at least 2 values");

  const double n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double quantile(std::span<const double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q outside [0, 1]");

  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::size_t distinct_count(std::span<const double> v, double tol) {
  if (v.empty()) throw std::invalid_argument("distinct_count: empty sample");
  if (!(tol >= 0.0)) throw std::invalid_argument("distinct_count: negative tolerance");

  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t classes = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] > tol) ++classes;
  return classes;
}

PairwiseDistances pairwise_distances(Projection points) {
  check_projection(points);
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("pairwise_distances: need at least 2 points");

  PairwiseDistances out;
  out.points_used = n;
  out.d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xi = points.x[i];
    const double yi = points.y[i];
    for (std::size_t z = i + 1; z < n; ++z) {
      const double dx = points.x[z] - xi;
      const double dy = points.y[z] - yi;
      out.d.push_back(std::sqrt(dx * dx + dy * dy));
    }
  }
  return out;
}

PairwiseDistances pairwise_distances(Projection points, std::size_t cap, std::uint64_t seed) {
  check_projection(points);
  if (cap < 2) throw std::invalid_argument("pairwise_distances: cap must be at least 2");
  if (points.size() <= cap) return pairwise_distances(points);

  std::vector<std::size_t> index(points.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  // Partial Fisher-Yates with an explicit draw so the result does not depend
  // on the standard library's distribution implementation.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t remaining = index.size() - i;
    const std::size_t pick = i + static_cast<std::size_t>(rng() % remaining);
    std::swap(index[i], index[pick]);
  }
  index.resize(cap);
  std::sort(index.begin(), index.end());

  std::vector<double> xs(cap), ys(cap);
  for (std::size_t i = 0; i < cap; ++i) {
    xs[i] = points.x[index[i]];
    ys[i] = points.y[index[i]];
  }
  return pairwise_distances(Projection{xs, ys});
}

KnnDistances knn_distances(Projection points, std::size_t k) {
  check_projection(points);
  const std::size_t n = points.size();
  if (k < 1) throw std::invalid_argument("knn_distances: k must be positive");
  if (k >= n)
    throw std::invalid_argument("knn_distances: k = " + std::to_string(k) +
                                " needs at least k + 1 points, got " + std::to_string(n));

  KnnDistances out;
  out.k = k;
  out.d.resize(n);
  std::vector<double> dist(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (std::size_t z = 0; z < n; ++z) {
      if (z == i) continue;
      const double dx = points.x[z] - points.x[i];
      const double dy = points.y[z] - points.y[i];
      dist[m++] = dx * dx + dy * dy;
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
    out.d[i] = std::sqrt(dist[k - 1]);
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace regqa
