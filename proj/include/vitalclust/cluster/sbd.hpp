#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>

#include "vitalclust/core/types.hpp"
#include "vitalclust/features/stats.hpp"

// Shape-based distance and the shared cross-correlation scan.
//
// NCC at shift w of z-normalized series a, b is (sum_t a_t * b_{t-w}) / T,
// non-circular with out-of-range terms zero. For population-z-normalized
// non-constant series this equals the dot product over ||a||*||b||.
// Shifts are scanned in the order 0, -1, +1, -2, +2, ... so that ties go
// to the smallest |w|, negative first.

namespace vitalclust::cluster {

struct NccResult {
  double max_ncc = 0.0;
  int best_shift = 0;
};

/// Dot product of x against y shifted by w (y_{t-w}), zero-padded.
inline double shifted_dot(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y, int w) {
  const auto n = static_cast<int>(x.size());
  if (w >= 0) {
    const int len = n - w;
    if (len <= 0) return 0.0;
    return x.segment(w, len).dot(y.segment(0, len));
  }
  const int len = n + w;
  if (len <= 0) return 0.0;
  return x.segment(0, len).dot(y.segment(-w, len));
}

/// Max NCC over shifts in [-(T-1), T-1] of the z-normalized inputs.
/// Constant inputs give {0, 0}.
inline NccResult ncc_scan(const Eigen::Ref<const Eigen::VectorXd>& a,
                          const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ncc_scan: length mismatch");
  const auto n = static_cast<int>(a.size());
  if (n < 2) throw std::invalid_argument("ncc_scan: need at least 2 samples");
  const Eigen::VectorXd za = stats::znorm(a);
  const Eigen::VectorXd zb = stats::znorm(b);
  if (za.isZero(0) || zb.isZero(0)) return {0.0, 0};
  NccResult best{-std::numeric_limits<double>::infinity(), 0};
  const double inv_t = 1.0 / static_cast<double>(n);
  for (int mag = 0; mag < n; ++mag) {
    for (int sign = 0; sign < (mag == 0 ? 1 : 2); ++sign) {
      const int w = sign == 0 ? -mag : mag;
      const double v = shifted_dot(za, zb, w) * inv_t;
      if (v > best.max_ncc) best = {v, w};
    }
  }
  return best;
}

struct SbdResult {
  double distance = 0.0;
  int best_shift = 0;
};

/// Shape-based distance, 1 - max NCC; in [0, 2]. Two length-matched
/// series, T >= 2. A constant series is at distance 1 from everything.
inline SbdResult sbd(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& y) {
  const NccResult r = ncc_scan(x, y);
  return {1.0 - r.max_ncc, r.best_shift};
}

/// Per-patient channel-wise z-normalization of a 5 x T grid.
inline VitalGrid znorm_grid(const VitalGrid& g) {
  VitalGrid out(kNumChannels, g.cols());
  for (int c = 0; c < kNumChannels; ++c)
    out.row(c) = stats::znorm(g.row(c).transpose()).transpose();
  return out;
}

/// Multivariate NCC: mean over the 5 channels of per-channel NCC at a
/// shared shift, maximized over shifts. Inputs are z-normalized per
/// channel internally (idempotent for already-normalized grids).
inline NccResult mncc_scan(const VitalGrid& a, const VitalGrid& b) {
  if (a.cols() != b.cols())
    throw std::invalid_argument("mncc_scan: timestep mismatch");
  const auto n = static_cast<int>(a.cols());
  if (n < 2) throw std::invalid_argument("mncc_scan: need at least 2 samples");
  const VitalGrid za = znorm_grid(a);
  const VitalGrid zb = znorm_grid(b);
  const double inv_t = 1.0 / static_cast<double>(n);
  NccResult best{-std::numeric_limits<double>::infinity(), 0};
  for (int mag = 0; mag < n; ++mag) {
    for (int sign = 0; sign < (mag == 0 ? 1 : 2); ++sign) {
      const int w = sign == 0 ? -mag : mag;
      double acc = 0.0;
      for (int c = 0; c < kNumChannels; ++c)
        acc += shifted_dot(za.row(c).transpose(), zb.row(c).transpose(), w) * inv_t;
      const double v = acc / kNumChannels;
      if (v > best.max_ncc) best = {v, w};
    }
  }
  return best;
}

/// Multivariate shape distance: 1 - max mean NCC at a shared shift.
inline double multivariate_sbd(const VitalGrid& a, const VitalGrid& b) {
  return 1.0 - mncc_scan(a, b).max_ncc;
}

/// Shifts y right by w (y_{t-w}), zero-padding the exposed ends.
inline Eigen::VectorXd shift_series(const Eigen::Ref<const Eigen::VectorXd>& y,
                                    int w) {
  const auto n = static_cast<int>(y.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  if (w >= 0) {
    if (w < n) out.segment(w, n - w) = y.segment(0, n - w);
  } else if (-w < n) {
    out.segment(0, n + w) = y.segment(-w, n + w);
  }
  return out;
}

}  // namespace vitalclust::cluster
