#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qmb/msd_series.hpp"
#include "qmb/types.hpp"

namespace qmb {

/// Eigenphases, eigenbasis and the velocity block expressed in that basis.
/// `eigenphases` lie in [0, 2pi) and are sorted ascending; `eigenvectors`
/// holds the matching columns and is unitary; `j_elements` = V^dagger J V.
struct SpectralData {
  int dim = 0;
  RealVector eigenphases;
  Matrix eigenvectors;
  Matrix j_elements;
};

/// Wraps a phase difference into (-pi, pi].
inline double wrap_phase(double delta) {
  double r = std::remainder(delta, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

namespace detail {

/// Groups sorted eigenphase indices into clusters of circular diameter
/// <= tol. Returns index lists into the sorted order; a cluster may span
/// the 0 / 2pi seam.
inline std::vector<std::vector<int>> phase_clusters(const RealVector& sorted_phases,
                                                    double tol) {
  const int n = static_cast<int>(sorted_phases.size());
  std::vector<std::vector<int>> clusters;
  if (n == 0) return clusters;
  // Gap following each sorted index, wrapping from the last back to the first.
  std::vector<double> gap(n);
  for (int i = 0; i < n; ++i) {
    const double next = (i + 1 < n) ? sorted_phases(i + 1)
                                    : sorted_phases(0) + 2.0 * std::numbers::pi;
    gap[i] = next - sorted_phases(i);
  }
  int start = -1;
  for (int i = 0; i < n; ++i)
    if (gap[i] > tol) {
      start = (i + 1) % n;
      break;
    }
  if (start < 0) {  // everything is one degenerate cluster
    clusters.emplace_back(n);
    std::iota(clusters.back().begin(), clusters.back().end(), 0);
    return clusters;
  }
  std::vector<int> current;
  for (int step = 0; step < n; ++step) {
    const int i = (start + step) % n;
    current.push_back(i);
    if (gap[i] > tol) {
      clusters.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) clusters.push_back(std::move(current));
  return clusters;
}

inline double circular_mean(const RealVector& phases, const std::vector<int>& idx) {
  Complex acc = 0.0;
  for (int i : idx) acc += std::polar(1.0, phases(i));
  double m = std::arg(acc);
  if (m < 0) m += 2.0 * std::numbers::pi;
  return m;
}

}  // namespace detail

/// Spectral decomposition of a local unitary via the complex Schur form,
/// which yields an exactly unitary eigenbasis for normal input. Eigenvalue
/// clusters closer than `cluster_tol` are rotated so that the velocity block
/// restricted to each cluster is diagonal; this makes the split of the pair
/// sum into diagonal and off-diagonal parts independent of the arbitrary
/// basis choice inside degenerate eigenspaces. The reconstruction residual
/// is checked against kSpectralTol.
inline SpectralData decompose(const LocalUnitary& local, double cluster_tol = kDegeneracyTol) {
  const int n = local.dim;
  Eigen::ComplexSchur<Matrix> schur(local.matrix, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw NumericalFailure("decompose: Schur iteration failed to converge", 1.0);

  RealVector phases(n);
  for (int i = 0; i < n; ++i) {
    double p = std::arg(schur.matrixT()(i, i));
    if (p < 0) p += 2.0 * std::numbers::pi;
    phases(i) = p;
  }
  Matrix vectors = schur.matrixU();

  // Sort columns by eigenphase for a deterministic, canonical ordering.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return phases(a) < phases(b); });
  RealVector sorted_phases(n);
  Matrix sorted_vectors(n, n);
  for (int i = 0; i < n; ++i) {
    sorted_phases(i) = phases(order[i]);
    sorted_vectors.col(i) = vectors.col(order[i]);
  }

  const RealVector v = VelocityBlock(n).diagonal();

  // Rotate each degenerate cluster so J restricted to it is diagonal.
  for (const auto& cluster : detail::phase_clusters(sorted_phases, cluster_tol)) {
    const int m = static_cast<int>(cluster.size());
    if (m < 2) continue;
    Matrix vc(n, m);
    for (int i = 0; i < m; ++i) vc.col(i) = sorted_vectors.col(cluster[i]);
    Matrix block = vc.adjoint() * (v.asDiagonal() * vc);
    block = 0.5 * (block + block.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> rot(block);
    if (rot.info() != Eigen::Success)
      throw NumericalFailure("decompose: cluster rotation failed", 1.0);
    vc = vc * rot.eigenvectors();
    const double mean = detail::circular_mean(sorted_phases, cluster);
    for (int i = 0; i < m; ++i) {
      sorted_vectors.col(cluster[i]) = vc.col(i);
      sorted_phases(cluster[i]) = mean;
    }
  }

  Matrix j_elements = sorted_vectors.adjoint() * (v.asDiagonal() * sorted_vectors);

  // Reconstruction check: B = V diag(e^{i phi}) V^dagger.
  Eigen::VectorXcd eigvals(n);
  for (int i = 0; i < n; ++i) eigvals(i) = std::polar(1.0, sorted_phases(i));
  const double residual =
      (local.matrix - sorted_vectors * eigvals.asDiagonal() * sorted_vectors.adjoint())
          .cwiseAbs()
          .maxCoeff();
  if (!(residual <= kSpectralTol))
    throw NumericalFailure("decompose: reconstruction residual exceeds tolerance", residual);

  return SpectralData{n, std::move(sorted_phases), std::move(sorted_vectors),
                      std::move(j_elements)};
}

/// Velocity autocorrelation from the spectral pair sum:
/// C_n = (1/N) sum_{j,k} |J_jk|^2 e^{i (phi_j - phi_k) n}.
/// The real part is accumulated over symmetrized pairs; the leftover
/// imaginary part is checked against tolerance and discarded.
inline double autocorrelation(const SpectralData& spec, long n) {
  if (n < 0) throw std::invalid_argument("autocorrelation: n must be >= 0");
  const int d = spec.dim;
  double re = 0.0, im = 0.0;
  for (int j = 0; j < d; ++j) {
    re += std::norm(spec.j_elements(j, j));
    for (int k = j + 1; k < d; ++k) {
      const double wjk = std::norm(spec.j_elements(j, k));
      const double wkj = std::norm(spec.j_elements(k, j));
      const double theta = (spec.eigenphases(j) - spec.eigenphases(k)) * n;
      re += (wjk + wkj) * std::cos(theta);
      im += (wjk - wkj) * std::sin(theta);
    }
  }
  re /= d;
  im /= d;
  if (!(std::abs(im) < 1e-10))
    throw NumericalFailure("autocorrelation: imaginary part above tolerance", std::abs(im));
  return re;
}

namespace detail {

/// Off-diagonal pair data for the spectral msd sum, symmetrized over (j,k)
/// and (k,j). Pairs with wrapped phase difference <= tol are folded into the
/// ballistic coefficient instead.
struct PairSum {
  double ballistic = 0.0;            // coefficient of t^2
  std::vector<double> alpha;         // wrapped phase differences, non-degenerate pairs
  std::vector<double> weight;        // |J_jk|^2 contributions / N
  std::vector<double> inv_sin2;      // 1 / sin^2(alpha/2)
};

inline PairSum pair_sum(const SpectralData& spec, double degeneracy_tol) {
  const int d = spec.dim;
  PairSum ps;
  double diag = 0.0, degen = 0.0;
  for (int j = 0; j < d; ++j) {
    diag += std::norm(spec.j_elements(j, j));
    for (int k = j + 1; k < d; ++k) {
      const double w = std::norm(spec.j_elements(j, k)) + std::norm(spec.j_elements(k, j));
      const double a = wrap_phase(spec.eigenphases(j) - spec.eigenphases(k));
      if (std::abs(a) <= degeneracy_tol) {
        degen += w;
      } else {
        const double s = std::sin(0.5 * a);
        ps.alpha.push_back(a);
        ps.weight.push_back(w / d);
        ps.inv_sin2.push_back(1.0 / (s * s));
      }
    }
  }
  ps.ballistic = (diag + degen) / d;
  return ps;
}

}  // namespace detail

/// Full coefficient of the t^2 term: diagonal elements plus degenerate
/// off-diagonal pairs, each |J|^2 / N.
inline double ballistic_coefficient(const SpectralData& spec,
                                    double degeneracy_tol = kDegeneracyTol) {
  return detail::pair_sum(spec, degeneracy_tol).ballistic;
}

/// Exact msd at the requested times from the closed spectral sum:
/// msd(t) = b t^2 + sum_{nondegenerate pairs} (|J_jk|^2/N)
///          sin^2(alpha t / 2) / sin^2(alpha / 2),
/// where the sine ratio is replaced by t^2 for pairs within the
/// degeneracy tolerance (folded into b above).
inline std::vector<double> msd_exact_at(const SpectralData& spec, std::span<const long> times,
                                        double degeneracy_tol = kDegeneracyTol) {
  if (!(degeneracy_tol > 0))
    throw std::invalid_argument("msd_exact: degeneracy tolerance must be positive");
  const detail::PairSum ps = detail::pair_sum(spec, degeneracy_tol);
  std::vector<double> out;
  out.reserve(times.size());
  for (long t : times) {
    const double td = static_cast<double>(t);
    double val = ps.ballistic * td * td;
    for (std::size_t m = 0; m < ps.alpha.size(); ++m) {
      const double s = std::sin(0.5 * ps.alpha[m] * td);
      val += ps.weight[m] * s * s * ps.inv_sin2[m];
    }
    out.push_back(val);
  }
  return out;
}

inline MsdSeries msd_exact(const SpectralData& spec, long t_max,
                           double degeneracy_tol = kDegeneracyTol) {
  if (t_max < 1) throw std::invalid_argument("msd_exact: t_max must be >= 1");
  MsdSeries series;
  series.source = "exact-spectral";
  series.times.resize(t_max + 1);
  std::iota(series.times.begin(), series.times.end(), 0L);
  series.values = msd_exact_at(spec, series.times, degeneracy_tol);
  series.add_param("n", std::to_string(spec.dim));
  series.add_param("degeneracy_tol", std::to_string(degeneracy_tol));
  return series;
}

/// Alternate msd assembly through the autocorrelation sum
/// msd(t) = t C_0 + 2 sum_{n=1}^{t-1} (t-n) C_n; used to cross-check
/// msd_exact, with which it agrees analytically.
inline MsdSeries msd_via_autocorrelations(const SpectralData& spec, long t_max) {
  if (t_max < 1) throw std::invalid_argument("msd_via_autocorrelations: t_max must be >= 1");
  MsdSeries series;
  series.source = "exact-spectral";
  const double c0 = autocorrelation(spec, 0);
  double sum_c = 0.0, sum_nc = 0.0;
  for (long t = 0; t <= t_max; ++t) {
    if (t >= 2) {
      const double c = autocorrelation(spec, t - 1);
      sum_c += c;
      sum_nc += static_cast<double>(t - 1) * c;
    }
    series.times.push_back(t);
    series.values.push_back(
        t == 0 ? 0.0 : static_cast<double>(t) * c0 + 2.0 * (static_cast<double>(t) * sum_c - sum_nc));
  }
  return series;
}

/// Long-time average of the msd in the localized (zero ballistic) case:
/// sum over non-degenerate pairs of |J_jk|^2 / (2 N sin^2(alpha/2)).
/// Any degenerate pair (including diagonal elements) carrying weight above
/// `element_tol` mixes ballistic growth into the oscillation and makes the
/// plateau undefined.
inline double plateau_value(const SpectralData& spec, double degeneracy_tol = kDegeneracyTol,
                            double element_tol = 1e-8) {
  const int d = spec.dim;
  double sum = 0.0;
  for (int j = 0; j < d; ++j) {
    if (std::abs(spec.j_elements(j, j)) > element_tol)
      throw UndefinedPlateau("plateau_value: diagonal element " + std::to_string(j) +
                             " carries ballistic weight");
    for (int k = 0; k < d; ++k) {
      if (k == j) continue;
      const double a = wrap_phase(spec.eigenphases(j) - spec.eigenphases(k));
      if (std::abs(a) <= degeneracy_tol) {
        if (std::abs(spec.j_elements(j, k)) > element_tol)
          throw UndefinedPlateau("plateau_value: degenerate pair carries weight");
        continue;
      }
      const double s = std::sin(0.5 * a);
      sum += std::norm(spec.j_elements(j, k)) / (2.0 * d * s * s);
    }
  }
  return sum;
}

/// Time at which the asymptotic ballistic term b t^2 overtakes the diffusive
/// term t, i.e. 1/b. Empty when the ballistic coefficient vanishes (the
/// localized case has no crossover).
inline std::optional<double> crossover_time(const SpectralData& spec,
                                            double degeneracy_tol = kDegeneracyTol,
                                            double zero_tol = 1e-10) {
  const double b = ballistic_coefficient(spec, degeneracy_tol);
  if (b <= zero_tol) return std::nullopt;
  return 1.0 / b;
}

}  // namespace qmb
