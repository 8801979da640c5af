#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace regqa {

// Two equally long columns viewed as N points in the plane.
struct Projection {
  std::span<const double> x;
  std::span<const double> y;

  std::size_t size() const { return x.size(); }
};

// Sample Pearson coefficient in [-1, 1]; nullopt when either input has zero variance.
// Throws std::invalid_argument on length mismatch or fewer than 2 values.
std::optional<double> pearson_r(std::span<const double> a, std::span<const double> b);

// Linear interpolation between order statistics at rank q * (n - 1).
double quantile(std::span<const double> v, double q);

// Number of value classes after sorting, merging neighbours whose gap is <= tol.
std::size_t distinct_count(std::span<const double> v, double tol = 0.0);

struct PairwiseDistances {
  std::vector<double> d;          // upper triangle, row by row
  std::size_t points_used = 0;    // < N when the input was subsampled
};

PairwiseDistances pairwise_distances(Projection points);

// As above, but a seeded uniform subsample of `cap` points is used when N > cap.
PairwiseDistances pairwise_distances(Projection points, std::size_t cap, std::uint64_t seed);

struct KnnDistances {
  std::vector<double> d;  // distance of each point to its k-th nearest other point
  std::size_t k = 0;
};

// Exhaustive O(N^2) search. Throws std::invalid_argument unless 1 <= k < N.
KnnDistances knn_distances(Projection points, std::size_t k);

// splitmix64 finaliser; used to derive independent RNG streams from a base seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace regqa
