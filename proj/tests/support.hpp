#pragma once

// Fixtures and brute-force oracles shared by the test binaries. Oracles here
// deliberately avoid the library's own algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "aperio/pointset.hpp"

namespace testing_support {

using aperio::Box;
using aperio::PointPatch;
using aperio::Vec;

inline const double kTau = (1.0 + std::sqrt(5.0)) / 2.0;
inline const double kTauConj = (1.0 - std::sqrt(5.0)) / 2.0;

/// c·ℤ ∩ [-half, half].
inline PointPatch lattice_1d(double c, double half) {
  std::vector<Vec> pts;
  const auto k = static_cast<long long>(std::floor(half / c));
  for (long long i = -k; i <= k; ++i) pts.push_back({static_cast<double>(i) * c});
  return PointPatch(Box::centered_cube(1, half), pts);
}

/// aℤ × bℤ ∩ [-half, half]^2.
inline PointPatch lattice_2d(double a, double b, double half) {
  std::vector<Vec> pts;
  const auto ka = static_cast<long long>(std::floor(half / a + 1e-12));
  const auto kb = static_cast<long long>(std::floor(half / b + 1e-12));
  for (long long i = -ka; i <= ka; ++i) {
    for (long long j = -kb; j <= kb; ++j) pts.push_back({static_cast<double>(i) * a, static_cast<double>(j) * b});
  }
  return PointPatch(Box::centered_cube(2, half), pts);
}

/// ℤ ∪ {k + 1/k : k ≠ 0} on [-half, half]; k = ±1 coincide with ±2.
inline PointPatch harmonic_set(double half) {
  std::vector<Vec> pts;
  const auto k_max = static_cast<long long>(half) + 1;
  for (long long k = -k_max; k <= k_max; ++k) {
    if (std::abs(static_cast<double>(k)) <= half) pts.push_back({static_cast<double>(k)});
    if (k != 0) {
      const double x = static_cast<double>(k) + 1.0 / static_cast<double>(k);
      if (std::abs(x) <= half) pts.push_back({x});
    }
  }
  return PointPatch::merged(Box::centered_cube(1, half), pts);
}

/// Fibonacci model set by the classical direct formula: n + mτ with
/// n + mτ' in [lo, hi). Independent of the lattice enumerator.
inline std::vector<double> fibonacci_oracle(double box_half, double w_lo, double w_hi) {
  std::vector<double> out;
  const auto m_max = static_cast<long long>(std::ceil((box_half + 2.0) / (kTau - kTauConj))) + 2;
  for (long long m = -4 * m_max; m <= 4 * m_max; ++m) {
    // n ranges so that n + mτ' is in [w_lo, w_hi).
    const double t = static_cast<double>(m) * kTauConj;
    for (auto n = static_cast<long long>(std::floor(w_lo - t)) - 1; n <= static_cast<long long>(std::ceil(w_hi - t)) + 1; ++n) {
      const double internal = static_cast<double>(n) + t;
      const double x = static_cast<double>(n) + static_cast<double>(m) * kTau;
      if (internal >= w_lo && internal < w_hi && std::abs(x) <= box_half) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Random points on a 1e-3 grid inside `box` (distinct after merging).
inline PointPatch random_patch(std::mt19937_64& rng, const Box& box, std::size_t n) {
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < n; ++i) {
    Vec p;
    for (const auto& s : box.sides()) {
      std::uniform_int_distribution<long long> k(0, static_cast<long long>(std::floor(s.length() * 1000)));
      p.push_back(s.lo + static_cast<double>(k(rng)) / 1000.0);
    }
    pts.push_back(p);
  }
  return PointPatch::merged(box, pts);
}

inline std::size_t brute_count(const PointPatch& p, const Vec& c, double h, bool closed) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool in = true;
    for (std::size_t a = 0; a < c.size() && in; ++a) {
      const double d = std::abs(p.point(i)[a] - c[a]);
      in = closed ? d <= h : d < h;
    }
    n += in ? 1 : 0;
  }
  return n;
}

/// Extreme window count by brute force over a candidate product set: per
/// axis the region ends plus every breakpoint q ± h and its ±eps neighbors.
/// Valid when distinct breakpoints are more than 2·eps apart.
inline std::size_t brute_extreme(const PointPatch& p, const Box& centers, double h, bool closed, bool want_max,
                                 double eps = 1e-7) {
  const std::size_t d = centers.dim();
  std::vector<std::vector<double>> cand(d);
  for (std::size_t a = 0; a < d; ++a) {
    std::set<double> s = {centers.side(a).lo, centers.side(a).hi};
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (double b : {p.point(i)[a] - h, p.point(i)[a] + h}) {
        for (double x : {b - eps, b, b + eps}) {
          if (x >= centers.side(a).lo && x <= centers.side(a).hi) s.insert(x);
        }
      }
    }
    cand[a].assign(s.begin(), s.end());
  }
  std::size_t best = want_max ? 0 : SIZE_MAX;
  std::vector<std::size_t> idx(d, 0);
  Vec c(d);
  while (true) {
    for (std::size_t a = 0; a < d; ++a) c[a] = cand[a][idx[a]];
    const std::size_t n = brute_count(p, c, h, closed);
    best = want_max ? std::max(best, n) : std::min(best, n);
    std::size_t a = 0;
    while (a < d && ++idx[a] == cand[a].size()) idx[a++] = 0;
    if (a == d) break;
  }
  return best;
}

}  // namespace testing_support
