#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

// Scalar statistics over one series. Population conventions throughout:
// std divides by n, skewness/kurtosis use population moments. Guards make
// every function total on finite input (constant series yield 0, not NaN).

namespace vitalclust::stats {

inline constexpr double kVarianceFloor = 1e-12;  // std below this counts as constant

template <typename Derived>
double mean(const Eigen::MatrixBase<Derived>& x) {
  return x.derived().mean();
}

template <typename Derived>
double population_std(const Eigen::MatrixBase<Derived>& x) {
  const auto& v = x.derived();
  const double m = v.mean();
  return std::sqrt((v.array() - m).square().mean());
}

/// Centers to mean 0 and scales to population std 1; all zeros when the
/// input is (numerically) constant.
template <typename Derived>
Eigen::VectorXd znorm(const Eigen::MatrixBase<Derived>& x) {
  const Eigen::VectorXd v = x.derived();
  const double m = v.mean();
  const double sd = population_std(v);
  if (sd < kVarianceFloor) return Eigen::VectorXd::Zero(v.size());
  return (v.array() - m) / sd;
}

/// Linear interpolation between order statistics, h = p * (n - 1).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

template <typename Derived>
double skewness(const Eigen::MatrixBase<Derived>& x) {
  const auto& v = x.derived();
  const double m = v.mean();
  const double sd = population_std(v);
  if (sd < kVarianceFloor) return 0.0;
  return ((v.array() - m) / sd).cube().mean();
}

template <typename Derived>
double excess_kurtosis(const Eigen::MatrixBase<Derived>& x) {
  const auto& v = x.derived();
  const double m = v.mean();
  const double sd = population_std(v);
  if (sd < kVarianceFloor) return 0.0;
  return ((v.array() - m) / sd).pow(4).mean() - 3.0;
}

struct LinearFit {
  double slope = 0;
  double intercept = 0;
};

/// Least squares of x against hours 0..T-1.
template <typename Derived>
LinearFit linear_fit(const Eigen::MatrixBase<Derived>& x) {
  const auto& v = x.derived();
  const auto n = static_cast<double>(v.size());
  const Eigen::VectorXd t =
      Eigen::VectorXd::LinSpaced(v.size(), 0.0, n - 1.0);
  const double tm = t.mean();
  const double xm = v.mean();
  const double denom = (t.array() - tm).square().sum();
  if (denom < kVarianceFloor) return {0.0, xm};
  const double slope = ((t.array() - tm) * (v.array() - xm)).sum() / denom;
  return {slope, xm - slope * tm};
}

/// Sum_{t<T-1} (x_t - m)(x_{t+1} - m) / Sum_t (x_t - m)^2; 0 when the
/// denominator vanishes.
template <typename Derived>
double autocorr_lag1(const Eigen::MatrixBase<Derived>& x) {
  const Eigen::VectorXd v = x.derived();
  const double m = v.mean();
  const Eigen::ArrayXd c = v.array() - m;
  const double denom = c.square().sum();
  if (denom < kVarianceFloor) return 0.0;
  const auto n = v.size();
  const double num = (c.head(n - 1) * c.tail(n - 1)).sum();
  return num / denom;
}

template <typename Derived>
double mean_abs_change(const Eigen::MatrixBase<Derived>& x) {
  const Eigen::VectorXd v = x.derived();
  const auto n = v.size();
  if (n < 2) return 0.0;
  return (v.tail(n - 1) - v.head(n - 1)).cwiseAbs().sum() /
         static_cast<double>(n - 1);
}

/// Number of consecutive pairs strictly straddling the mean.
template <typename Derived>
int mean_crossings(const Eigen::MatrixBase<Derived>& x) {
  const Eigen::VectorXd v = x.derived();
  const double m = v.mean();
  int count = 0;
  for (Eigen::Index t = 0; t + 1 < v.size(); ++t)
    if ((v[t] - m) * (v[t + 1] - m) < 0) ++count;
  return count;
}

/// Pearson correlation; 0 when either side is (numerically) constant.
template <typename DerivedA, typename DerivedB>
double pearson(const Eigen::MatrixBase<DerivedA>& a,
               const Eigen::MatrixBase<DerivedB>& b) {
  const Eigen::VectorXd x = a.derived();
  const Eigen::VectorXd y = b.derived();
  const double sx = population_std(x);
  const double sy = population_std(y);
  if (sx < kVarianceFloor || sy < kVarianceFloor) return 0.0;
  const double cov =
      ((x.array() - x.mean()) * (y.array() - y.mean())).mean();
  return cov / (sx * sy);
}

}  // namespace vitalclust::stats
