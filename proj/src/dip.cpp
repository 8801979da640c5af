#include "regqa/dip.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <tuple>

#include "parallel.hpp"
#include "regqa/stats.hpp"

namespace regqa {

namespace {

struct DipCore {
  double dip_2n;          // dip scaled by 2n
  std::ptrdiff_t low;     // 1-based modal interval indices
  std::ptrdiff_t high;
};

// Port of the AS 217 algorithm with the corrections carried by the R
// `diptest` package. Indices are 1-based to stay close to the published
// formulation. Every slope comparison is a product of differences and every
// distance a single division of such products, so multiplying the sample by
// a positive constant and shifting it leaves all comparisons unchanged.
template <typename Index>
DipCore hartigan_dip(std::span<const double> sorted) {
  const Index n = static_cast<Index>(sorted.size());
  auto x = [&](Index i) { return sorted[static_cast<std::size_t>(i - 1)]; };
  auto dbl = [](Index i) { return static_cast<double>(i); };

  Index low = 1;
  Index high = n;
  double dip = 1.0;
  if (n < 2 || x(n) == x(1)) return {dip, low, high};

  // Scratch buffers are reused across calls on the same thread; the bootstrap
  // calls this thousands of times with the same n.
  thread_local std::vector<Index> mn, mj, gcm, lcm;
  for (auto* v : {&mn, &mj, &gcm, &lcm})
    if (v->size() < static_cast<std::size_t>(n + 2)) v->resize(static_cast<std::size_t>(n + 2));
  auto at = [](std::vector<Index>& v, Index i) -> Index& { return v[static_cast<std::size_t>(i)]; };

  // Fit indices for the convex minorant.
  at(mn, 1) = 1;
  for (Index j = 2; j <= n; ++j) {
    at(mn, j) = j - 1;
    for (;;) {
      const Index mnj = at(mn, j);
      const Index mnmnj = at(mn, mnj);
      if (mnj == 1 ||
          (x(j) - x(mnj)) * dbl(mnj - mnmnj) < (x(mnj) - x(mnmnj)) * dbl(j - mnj))
        break;
      at(mn, j) = mnmnj;
    }
  }

  // Fit indices for the concave majorant.
  at(mj, n) = n;
  for (Index k = n - 1; k >= 1; --k) {
    at(mj, k) = k + 1;
    for (;;) {
      const Index mjk = at(mj, k);
      const Index mjmjk = at(mj, mjk);
      if (mjk == n ||
          (x(k) - x(mjk)) * dbl(mjk - mjmjk) < (x(mjk) - x(mjmjk)) * dbl(k - mjk))
        break;
      at(mj, k) = mjmjk;
    }
  }

  for (;;) {
    // Change points of the GCM from high down to low.
    Index i = 1;
    at(gcm, 1) = high;
    while (at(gcm, i) > low) {
      at(gcm, i + 1) = at(mn, at(gcm, i));
      ++i;
    }
    const Index l_gcm = i;
    Index ig = l_gcm;
    Index ix = ig - 1;

    // Change points of the LCM from low up to high.
    i = 1;
    at(lcm, 1) = low;
    while (at(lcm, i) < high) {
      at(lcm, i + 1) = at(mj, at(lcm, i));
      ++i;
    }
    const Index l_lcm = i;
    Index ih = l_lcm;
    Index iv = 2;

    // Largest distance between the GCM and the LCM on [low, high].
    double d = 0.0;
    if (l_gcm != 2 || l_lcm != 2) {
      do {
        const Index gcmix = at(gcm, ix);
        const Index lcmiv = at(lcm, iv);
        if (gcmix > lcmiv) {
          const Index gcmi1 = at(gcm, ix + 1);
          const double dx = dbl(lcmiv - gcmi1 + 1) -
                            (x(lcmiv) - x(gcmi1)) * dbl(gcmix - gcmi1) / (x(gcmix) - x(gcmi1));
          ++iv;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv - 1;
          }
        } else {
          const Index lcmiv1 = at(lcm, iv - 1);
          const double dx = (x(gcmix) - x(lcmiv1)) * dbl(lcmiv - lcmiv1) / (x(lcmiv) - x(lcmiv1)) -
                            dbl(gcmix - lcmiv1 - 1);
          --ix;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv;
          }
        }
        if (ix < 1) ix = 1;
        if (iv > l_lcm) iv = l_lcm;
      } while (at(gcm, ix) != at(lcm, iv));
    } else {
      d = 1.0;
    }

    if (d < dip) break;

    // Dip of the convex minorant below the modal interval.
    double dip_l = 0.0;
    for (Index j = ig; j < l_gcm; ++j) {
      double max_t = 1.0;
      const Index jb = at(gcm, j + 1);
      const Index je = at(gcm, j);
      if (je - jb > 1 && x(je) != x(jb)) {
        const double span = x(je) - x(jb);
        for (Index jj = jb; jj <= je; ++jj) {
          const double t = dbl(jj - jb + 1) - (x(jj) - x(jb)) * dbl(je - jb) / span;
          max_t = std::max(max_t, t);
        }
      }
      dip_l = std::max(dip_l, max_t);
    }

    // Dip of the concave majorant above it.
    double dip_u = 0.0;
    for (Index j = ih; j < l_lcm; ++j) {
      double max_t = 1.0;
      const Index jb = at(lcm, j);
      const Index je = at(lcm, j + 1);
      if (je - jb > 1 && x(je) != x(jb)) {
        const double span = x(je) - x(jb);
        for (Index jj = jb; jj <= je; ++jj) {
          const double t = (x(jj) - x(jb)) * dbl(je - jb) / span - dbl(jj - jb - 1);
          max_t = std::max(max_t, t);
        }
      }
      dip_u = std::max(dip_u, max_t);
    }

    dip = std::max(dip, std::max(dip_l, dip_u));

    // Without this check the cycle can repeat forever.
    if (low == at(gcm, ig) && high == at(lcm, ih)) break;
    low = at(gcm, ig);
    high = at(lcm, ih);
  }
  return {dip, low, high};
}

// Sorted uniform(0,1) sample from normalised partial sums of Exp(1) spacings.
void sorted_uniform_sample(std::uint64_t seed, std::vector<double>& out) {
  std::mt19937_64 rng(seed);
  const std::size_t n = out.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    sum += -std::log1p(-u);
    out[i] = sum;
  }
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  sum += -std::log1p(-u);
  for (auto& v : out) v /= sum;
}

}  // namespace

DipResult dip_statistic_sorted(std::span<const double> sorted) {
  if (sorted.size() < 2) throw std::invalid_argument("dip_statistic: need at least 2 values");
  assert(std::is_sorted(sorted.begin(), sorted.end()));
  const auto core = sorted.size() < (std::size_t{1} << 30)
                        ? hartigan_dip<std::int32_t>(sorted)
                        : hartigan_dip<std::ptrdiff_t>(sorted);
  DipResult r;
  r.n = sorted.size();
  r.v_dip = core.dip_2n / (2.0 * static_cast<double>(r.n));
  r.modal_lo = sorted[static_cast<std::size_t>(core.low - 1)];
  r.modal_hi = sorted[static_cast<std::size_t>(core.high - 1)];
  return r;
}

DipResult dip_statistic(std::span<const double> sample) {
  if (sample.size() < 2) throw std::invalid_argument("dip_statistic: need at least 2 values");
  for (double v : sample)
    if (!std::isfinite(v)) throw std::invalid_argument("dip_statistic: non-finite value");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  return dip_statistic_sorted(sorted);
}

std::shared_ptr<const std::vector<double>> uniform_null_dips(std::size_t n, std::size_t b,
                                                             std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("uniform_null_dips: n must be at least 2");
  if (b < 1) throw std::invalid_argument("uniform_null_dips: need at least one replicate");

  using Key = std::tuple<std::size_t, std::size_t, std::uint64_t>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;

  const Key key{n, b, seed};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  auto dips = std::make_shared<std::vector<double>>(b);
  const std::size_t workers = std::min<std::size_t>(detail::default_workers(), b);
  detail::parallel_chunks(b, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> sample(n);
    for (std::size_t r = begin; r < end; ++r) {
      sorted_uniform_sample(mix_seed(seed, r), sample);
      (*dips)[r] = dip_statistic_sorted(sample).v_dip;
    }
  });
  std::sort(dips->begin(), dips->end());

  std::lock_guard lock(mutex);
  return cache.try_emplace(key, std::move(dips)).first->second;
}

double dip_pvalue(double v_dip, std::size_t n, std::size_t b, std::uint64_t seed) {
  const auto null = uniform_null_dips(n, b, seed);
  const auto first_ge = std::lower_bound(null->begin(), null->end(), v_dip);
  const auto at_least = static_cast<double>(null->end() - first_ge);
  return (1.0 + at_least) / (static_cast<double>(b) + 1.0);
}

}  // namespace regqa
