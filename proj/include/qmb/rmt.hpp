#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "qmb/msd_series.hpp"
#include "qmb/rng.hpp"
#include "qmb/spectral.hpp"
#include "qmb/types.hpp"

namespace qmb {

enum class Ensemble { CUE, COE };

inline const char* ensemble_name(Ensemble e) { return e == Ensemble::CUE ? "CUE" : "COE"; }

/// Which circular ensemble, at which dimension, plus the sampling contract
/// for Monte-Carlo use. The element-average parameter k is 1 for CUE and 2
/// for COE by construction.
struct EnsembleSpec {
  Ensemble kind = Ensemble::CUE;
  int dim = 2;
  std::uint64_t seed = 0;
  int samples = 0;

  int k() const { return kind == Ensemble::CUE ? 1 : 2; }
};

namespace detail {
inline void check_dim(const EnsembleSpec& spec, const char* where) {
  if (spec.dim < 2 || spec.dim % 2 != 0)
    throw std::invalid_argument(std::string(where) + ": ensemble dim must be even and >= 2");
}
}  // namespace detail

/// Ensemble average of |J_jj|^2: k / (N + k).
inline double mean_jj(const EnsembleSpec& spec) {
  detail::check_dim(spec, "mean_jj");
  return static_cast<double>(spec.k()) / (spec.dim + spec.k());
}

/// Ensemble average of |J_jk|^2 for j != k: N / ((N + k)(N - 1)), fixed by
/// the sum rule mean_jj + (N-1) mean_offdiag = 1.
inline double mean_offdiag(const EnsembleSpec& spec) {
  detail::check_dim(spec, "mean_offdiag");
  if (spec.dim < 2) throw std::invalid_argument("mean_offdiag: dim must be >= 2");
  return static_cast<double>(spec.dim) /
         (static_cast<double>(spec.dim + spec.k()) * (spec.dim - 1));
}

/// CUE pair-correlation average of e^{i (phi_j - phi_k) n}:
/// 1 at n = 0, (n - N)/(N(N-1)) for 0 < n < N, and 0 for n >= N.
inline double cue_phase_average(long n, int dim) {
  if (n < 0) throw std::invalid_argument("cue_phase_average: n must be >= 0");
  if (dim < 2) throw std::invalid_argument("cue_phase_average: dim must be >= 2");
  if (n == 0) return 1.0;
  if (n >= dim) return 0.0;
  return static_cast<double>(n - dim) / (static_cast<double>(dim) * (dim - 1));
}

/// Piecewise ensemble-average msd:
///   t <= N:  t + t(t-1)/(N+k) [ k-1 + (t-2) / (3(N-1)) ]
///   t >  N:  k t^2 / (N+k) + N/3 - N(k-1) / (3(N+k))
/// For COE this is the k = 2 element-average approximation; the exact COE
/// pair-correlation correction (at most ~5% near t = N) is not included.
inline double msd_closed_form_value(const EnsembleSpec& spec, long t) {
  detail::check_dim(spec, "msd_closed_form");
  const double n = spec.dim, k = spec.k(), td = static_cast<double>(t);
  if (t <= spec.dim)
    return td + td * (td - 1.0) / (n + k) * ((k - 1.0) + (td - 2.0) / (3.0 * (n - 1.0)));
  return k / (n + k) * td * td + n / 3.0 - n * (k - 1.0) / (3.0 * (n + k));
}

inline std::vector<double> msd_closed_form_at(const EnsembleSpec& spec,
                                              std::span<const long> times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (long t : times) out.push_back(msd_closed_form_value(spec, t));
  return out;
}

inline MsdSeries msd_closed_form(const EnsembleSpec& spec, long t_max) {
  if (t_max < 1) throw std::invalid_argument("msd_closed_form: t_max must be >= 1");
  MsdSeries series;
  series.source = "rmt-closed-form";
  series.times.resize(t_max + 1);
  std::iota(series.times.begin(), series.times.end(), 0L);
  series.values = msd_closed_form_at(spec, series.times);
  series.add_param("ensemble", ensemble_name(spec.kind));
  series.add_param("n", std::to_string(spec.dim));
  return series;
}

namespace detail {

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// R-diagonal phases normalized away.
inline Matrix haar_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) z(i, j) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace detail

/// Draws sample `index` of the ensemble: Haar unitary for CUE, U^T U for
/// COE (symmetric unitary). Pure function of (spec.seed, index).
inline LocalUnitary sample_unitary(const EnsembleSpec& spec, long index) {
  detail::check_dim(spec, "sample_unitary");
  std::mt19937_64 rng = stream_rng(spec.seed, static_cast<std::uint64_t>(index));
  Matrix u = detail::haar_unitary(spec.dim, rng);
  if (spec.kind == Ensemble::COE) u = (u.transpose() * u).eval();
  return make_local_unitary(std::move(u), spec.kind == Ensemble::CUE ? "cue-sample" : "coe-sample");
}

/// Per-time mean and standard error of the exact msd over ensemble samples.
struct MonteCarloMsd {
  std::vector<double> mean;
  std::vector<double> stderr_;
};

inline MonteCarloMsd msd_monte_carlo_at(const EnsembleSpec& spec, std::span<const long> times,
                                        double degeneracy_tol = kDegeneracyTol) {
  if (spec.samples < 2) throw std::invalid_argument("msd_monte_carlo: samples must be >= 2");
  const std::size_t nt = times.size();
  std::vector<std::vector<double>> values(spec.samples);
  for (int s = 0; s < spec.samples; ++s) {
    const SpectralData sd = decompose(sample_unitary(spec, s));
    values[s] = msd_exact_at(sd, times, degeneracy_tol);
  }
  // Fixed-order reduction keeps results independent of any evaluation order.
  MonteCarloMsd out;
  out.mean.assign(nt, 0.0);
  out.stderr_.assign(nt, 0.0);
  for (int s = 0; s < spec.samples; ++s)
    for (std::size_t i = 0; i < nt; ++i) out.mean[i] += values[s][i];
  for (std::size_t i = 0; i < nt; ++i) out.mean[i] /= spec.samples;
  for (int s = 0; s < spec.samples; ++s)
    for (std::size_t i = 0; i < nt; ++i) {
      const double d = values[s][i] - out.mean[i];
      out.stderr_[i] += d * d;
    }
  for (std::size_t i = 0; i < nt; ++i)
    out.stderr_[i] = std::sqrt(out.stderr_[i] / (spec.samples - 1.0) / spec.samples);
  return out;
}

inline MsdSeries msd_monte_carlo(const EnsembleSpec& spec, long t_max,
                                 double degeneracy_tol = kDegeneracyTol) {
  if (t_max < 1) throw std::invalid_argument("msd_monte_carlo: t_max must be >= 1");
  MsdSeries series;
  series.source = "rmt-monte-carlo";
  series.times.resize(t_max + 1);
  std::iota(series.times.begin(), series.times.end(), 0L);
  MonteCarloMsd mc = msd_monte_carlo_at(spec, series.times, degeneracy_tol);
  series.values = std::move(mc.mean);
  series.stderrs = std::move(mc.stderr_);
  series.add_param("ensemble", ensemble_name(spec.kind));
  series.add_param("n", std::to_string(spec.dim));
  series.add_param("samples", std::to_string(spec.samples));
  series.add_param("seed", std::to_string(spec.seed));
  return series;
}

}  // namespace qmb
