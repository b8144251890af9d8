#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qmb/msd_series.hpp"
#include "qmb/rng.hpp"
#include "qmb/types.hpp"

namespace qmb {

/// One phase-space point of the classical multi-baker chain: cell index on
/// the ring, unit-square coordinates, and the accumulated (unwrapped) cell
/// displacement.
struct ClassicalPoint {
  std::int64_t cell = 0;
  double x = 0.0;
  double y = 0.0;
  std::int64_t displacement = 0;
};

struct ClassicalEnsemble {
  int cells = 0;
  std::vector<ClassicalPoint> points;
};

/// Uniform (equilibrium) ensemble; point i draws from its own splitmix64
/// stream derived from the seed, so the initial condition is independent of
/// generation order.
inline ClassicalEnsemble make_uniform_ensemble(int cells, long count, std::uint64_t seed) {
  if (cells < 2) throw std::invalid_argument("classical ensemble: cells must be >= 2");
  if (count < 1) throw std::invalid_argument("classical ensemble: point count must be >= 1");
  ClassicalEnsemble ens;
  ens.cells = cells;
  ens.points.resize(count);
  for (long i = 0; i < count; ++i) {
    std::uint64_t state = derive_stream(seed, static_cast<std::uint64_t>(i));
    ClassicalPoint& p = ens.points[i];
    p.cell = static_cast<std::int64_t>(splitmix64(state) % static_cast<std::uint64_t>(cells));
    p.x = uniform_unit(state);
    p.y = uniform_unit(state);
  }
  return ens;
}

/// One application of the multi-baker map
///   (n, x, y) -> (n+1, 2x, y/2)          for 0 <= x < 1/2
///   (n, x, y) -> (n-1, 2x-1, (1+y)/2)    for 1/2 <= x < 1
/// with the cell index wrapped mod L and the net displacement tracked
/// unwrapped. The branch boundary x = 1/2 belongs to the second branch.
inline ClassicalEnsemble& classical_step(ClassicalEnsemble& ens) {
  const std::int64_t L = ens.cells;
  for (ClassicalPoint& p : ens.points) {
    if (p.x < 0.5) {
      p.cell = (p.cell + 1) % L;
      p.displacement += 1;
      p.x = 2.0 * p.x;
      p.y = 0.5 * p.y;
    } else {
      p.cell = (p.cell - 1 + L) % L;
      p.displacement -= 1;
      p.x = 2.0 * p.x - 1.0;
      p.y = 0.5 * (1.0 + p.y);
    }
  }
  return ens;
}

/// Ensemble-average msd of the unwrapped cell displacement for t = 0..t_max,
/// with the per-time standard error of the mean. Requires t_max < L/2 so the
/// ring cannot be wound during the observation window.
inline MsdSeries classical_msd(int cells, long points, long t_max, std::uint64_t seed) {
  if (t_max < 1) throw std::invalid_argument("classical_msd: t_max must be >= 1");
  if (2 * t_max >= cells)
    throw std::invalid_argument("classical_msd: t_max must be < cells/2");
  ClassicalEnsemble ens = make_uniform_ensemble(cells, points, seed);
  MsdSeries series;
  series.source = "classical";
  series.times.push_back(0);
  series.values.push_back(0.0);
  series.stderrs.push_back(0.0);
  for (long t = 1; t <= t_max; ++t) {
    classical_step(ens);
    double mean = 0.0, mean_sq = 0.0;
    for (const ClassicalPoint& p : ens.points) {
      const double d2 = static_cast<double>(p.displacement) * static_cast<double>(p.displacement);
      mean += d2;
      mean_sq += d2 * d2;
    }
    const double count = static_cast<double>(points);
    mean /= count;
    mean_sq /= count;
    const double var = std::max(0.0, mean_sq - mean * mean);
    series.times.push_back(t);
    series.values.push_back(mean);
    series.stderrs.push_back(points > 1 ? std::sqrt(var / (count - 1.0)) : 0.0);
  }
  series.add_param("cells", std::to_string(cells));
  series.add_param("points", std::to_string(points));
  series.add_param("seed", std::to_string(seed));
  return series;
}

}  // namespace qmb
