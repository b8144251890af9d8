#pragma once

#include <cassert>
#include <vector>

#include "qmb/msd_series.hpp"
#include "qmb/types.hpp"

namespace qmb {

/// Dense materialization cap for the NL x NL propagator.
inline constexpr long kChainDenseLimit = 4096;

/// Coarse observables on a ring of `cells` cells with `local_dim` internal
/// states. Both are diagonal in the position basis: `position` holds the
/// cell index of each basis state, `velocity` the per-cell +-1 half-split.
struct CoarseObservables {
  RealVector position;
  RealVector velocity;
};

inline CoarseObservables coarse_observables(int cells, int local_dim) {
  const VelocityBlock j(local_dim);
  RealVector pos(static_cast<long>(cells) * local_dim);
  RealVector vel(pos.size());
  for (int n = 0; n < cells; ++n)
    for (int k = 0; k < local_dim; ++k) {
      pos(static_cast<long>(n) * local_dim + k) = n;
      vel(static_cast<long>(n) * local_dim + k) = j.sign(k);
    }
  return {std::move(pos), std::move(vel)};
}

/// One step of the multi-baker chain on a periodic ring: states in the left
/// half of cell n are carried to cell n+1 and states in the right half to
/// cell n-1, each with the local unitary's amplitudes. Only the local block
/// and the ring length are stored; the NL x NL matrix is block-sparse with
/// two N x (N/2) blocks per column cell.
class ChainOperator {
 public:
  ChainOperator(LocalUnitary local, int cells)
      : cells_(cells), local_(std::move(local)) {
    if (cells < 2) throw std::invalid_argument("build_chain: cells must be >= 2");
  }

  int cells() const { return cells_; }
  int local_dim() const { return local_.dim; }
  long total_dim() const { return static_cast<long>(cells_) * local_.dim; }
  const LocalUnitary& local() const { return local_; }

  /// M * a, evaluated block-wise. Rows of cell r receive the left-half
  /// columns of cell r-1 and the right-half columns of cell r+1.
  Matrix apply(const Matrix& a) const {
    const int n = local_.dim, h = n / 2, L = cells_;
    assert(a.rows() == total_dim());
    Matrix out(a.rows(), a.cols());
    for (int r = 0; r < L; ++r) {
      const long src_left = static_cast<long>((r - 1 + L) % L) * n;
      const long src_right = static_cast<long>((r + 1) % L) * n + h;
      out.middleRows(static_cast<long>(r) * n, n) =
          local_.matrix.leftCols(h) * a.middleRows(src_left, h) +
          local_.matrix.rightCols(h) * a.middleRows(src_right, h);
    }
    return out;
  }

  Matrix dense() const {
    const int n = local_.dim, h = n / 2, L = cells_;
    Matrix m = Matrix::Zero(total_dim(), total_dim());
    for (int c = 0; c < L; ++c) {
      const long col = static_cast<long>(c) * n;
      m.block(static_cast<long>((c + 1) % L) * n, col, n, h) = local_.matrix.leftCols(h);
      m.block(static_cast<long>((c - 1 + L) % L) * n, col + h, n, h) =
          local_.matrix.rightCols(h);
    }
    return m;
  }

 private:
  int cells_;
  LocalUnitary local_;
};

/// Assembles the ring propagator and verifies unitarity of the dense form.
inline ChainOperator build_chain(const LocalUnitary& local, int cells) {
  ChainOperator chain(local, cells);
  if (chain.total_dim() > kChainDenseLimit)
    throw std::invalid_argument("build_chain: cells * local_dim exceeds dense limit " +
                                std::to_string(kChainDenseLimit));
  const double res = unitarity_residual(chain.dense());
  if (!(res <= kUnitarityTol))
    throw NumericalFailure("build_chain: propagator not unitary", res);
  return chain;
}

/// Velocity autocorrelations C_n = Tr[M^{-n} v M^n v] / (L N) for
/// n = 0..n_max, computed by power iteration on the full ring. With v
/// diagonal the trace is sum |(M^n)_{ab}|^2 v_a v_b, which is real by
/// construction.
inline std::vector<double> chain_autocorrelations(const ChainOperator& chain, long n_max) {
  if (n_max < 0) throw std::invalid_argument("chain_autocorrelations: n must be >= 0");
  const long d = chain.total_dim();
  const RealVector v = coarse_observables(chain.cells(), chain.local_dim()).velocity;
  std::vector<double> out;
  out.reserve(n_max + 1);
  Matrix power = Matrix::Identity(d, d);
  for (long n = 0; n <= n_max; ++n) {
    if (n > 0) power = chain.apply(power);
    double trace = 0.0;
    for (long b = 0; b < d; ++b) {
      double col = 0.0;
      for (long a = 0; a < d; ++a) col += std::norm(power(a, b)) * v(a);
      trace += col * v(b);
    }
    out.push_back(trace / static_cast<double>(d));
  }
  return out;
}

inline double chain_autocorrelation(const ChainOperator& chain, long n) {
  return chain_autocorrelations(chain, n).back();
}

/// Mean square displacement on the ring, assembled from the velocity
/// autocorrelations: msd(t) = t <v^2> + 2 sum_{n=1}^{t-1} (t-n) C_n with
/// <v^2> = 1 since v^2 is the identity.
inline MsdSeries chain_msd(const ChainOperator& chain, long t_max) {
  if (t_max < 1) throw std::invalid_argument("chain_msd: t_max must be >= 1");
  const std::vector<double> c = chain_autocorrelations(chain, t_max - 1);
  MsdSeries series;
  series.source = "chain-oracle";
  series.times.reserve(t_max + 1);
  series.values.reserve(t_max + 1);
  double sum_c = 0.0;       // sum of C_n for 1 <= n <= t-1
  double sum_nc = 0.0;      // sum of n C_n for 1 <= n <= t-1
  for (long t = 0; t <= t_max; ++t) {
    if (t >= 2) {
      sum_c += c[t - 1];
      sum_nc += static_cast<double>(t - 1) * c[t - 1];
    }
    series.times.push_back(t);
    series.values.push_back(t == 0 ? 0.0
                                   : static_cast<double>(t) +
                                         2.0 * (static_cast<double>(t) * sum_c - sum_nc));
  }
  series.add_param("local", chain.local().label);
  series.add_param("n", std::to_string(chain.local_dim()));
  series.add_param("cells", std::to_string(chain.cells()));
  return series;
}

}  // namespace qmb
