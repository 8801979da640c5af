#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace regqa {

// Hartigan's dip statistic of unimodality for a 1-D sample.
struct DipResult {
  double v_dip = 0.0;   // in [1/(2n), 0.25]
  double p_dip = 1.0;   // bootstrap p-value; 1 until dip_pvalue has been applied
  std::size_t n = 0;
  double modal_lo = 0.0;  // sample values bounding the fitted modal interval
  double modal_hi = 0.0;
};

// Computes the dip with the alternating greatest-convex-minorant /
// least-concave-majorant algorithm. The input need not be sorted.
// Throws std::invalid_argument for n < 2 or non-finite values.
DipResult dip_statistic(std::span<const double> sample);

// Same, for input already sorted ascending (not checked beyond a debug assert).
DipResult dip_statistic_sorted(std::span<const double> sorted);

// Sorted dips of `b` uniform(0,1) samples of size n. Replicate r draws from a
// stream seeded by (seed, r), so the result does not depend on how many
// threads compute it. Results are cached per process keyed by (n, b, seed).
std::shared_ptr<const std::vector<double>> uniform_null_dips(std::size_t n, std::size_t b,
                                                             std::uint64_t seed);

// (1 + #{null dips >= v_dip}) / (b + 1).
double dip_pvalue(double v_dip, std::size_t n, std::size_t b, std::uint64_t seed);

}  // namespace regqa
