#include "vitalclust/prognosis/align.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vitalclust::prognosis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Potentials + shortest augmenting path; returns row -> column and leaves
// the optimal total in `total`.
std::vector<int> hungarian_optimal(const Eigen::MatrixXd& a, double& total) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  total = 0.0;
  for (int j = 1; j <= n; ++j) {
    assign[static_cast<std::size_t>(p[j] - 1)] = j - 1;
    total += a(p[j] - 1, j - 1);
  }
  return assign;
}

}  // namespace

std::vector<int> hungarian(const Eigen::MatrixXd& cost, double tie_tol) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("hungarian: square matrix required");
  const int n = static_cast<int>(cost.rows());
  if (n == 0) return {};

  double best_total = 0.0;
  hungarian_optimal(cost, best_total);
  const double tol = tie_tol * std::max(1.0, std::abs(best_total));

  // Fix columns row by row, smallest column first, keeping the remainder
  // optimally solvable at the same total.
  std::vector<int> assign(static_cast<std::size_t>(n), -1);
  std::vector<char> col_used(static_cast<std::size_t>(n), 0);
  double prefix = 0.0;
  for (int i = 0; i < n; ++i) {
    bool fixed = false;
    for (int j = 0; j < n && !fixed; ++j) {
      if (col_used[static_cast<std::size_t>(j)]) continue;
      const int m = n - i - 1;
      double sub_total = 0.0;
      if (m > 0) {
        Eigen::MatrixXd sub(m, m);
        int rr = 0;
        for (int r = i + 1; r < n; ++r, ++rr) {
          int cc = 0;
          for (int c = 0; c < n; ++c) {
            if (col_used[static_cast<std::size_t>(c)] || c == j) continue;
            sub(rr, cc++) = cost(r, c);
          }
        }
        hungarian_optimal(sub, sub_total);
      }
      if (prefix + cost(i, j) + sub_total <= best_total + tol) {
        assign[static_cast<std::size_t>(i)] = j;
        col_used[static_cast<std::size_t>(j)] = 1;
        prefix += cost(i, j);
        fixed = true;
      }
    }
    if (!fixed) throw std::logic_error("hungarian: tie refinement failed");
  }
  return assign;
}

std::vector<int> align_labels_overlap(const std::vector<int>& reference,
                                      const std::vector<int>& other, int k) {
  if (reference.size() != other.size())
    throw std::invalid_argument("align_labels: length mismatch");
  if (k < 1) throw std::invalid_argument("align_labels: k must be >= 1");

  Eigen::MatrixXd overlap = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const int r = reference[i], o = other[i];
    if (r < 0 || o < 0) continue;
    if (r >= k || o >= k) throw std::invalid_argument("align_labels: label out of range");
    overlap(o, r) += 1.0;
  }
  return hungarian(-overlap, 0.0);  // integer counts: exact ties
}

std::vector<int> align_labels_centroids(const Eigen::MatrixXd& reference_centers,
                                        const Eigen::MatrixXd& other_centers) {
  if (reference_centers.rows() != other_centers.rows() ||
      reference_centers.cols() != other_centers.cols())
    throw std::invalid_argument("align_labels: center shape mismatch");
  const Eigen::Index k = reference_centers.rows();
  Eigen::MatrixXd cost(k, k);
  for (Eigen::Index o = 0; o < k; ++o)
    for (Eigen::Index r = 0; r < k; ++r)
      cost(o, r) = (other_centers.row(o) - reference_centers.row(r)).norm();
  return hungarian(cost);
}

std::vector<int> apply_permutation(const std::vector<int>& labels,
                                   const std::vector<int>& p) {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l < 0) {
      out[i] = l;
    } else {
      if (static_cast<std::size_t>(l) >= p.size())
        throw std::invalid_argument("apply_permutation: label out of range");
      out[i] = p[static_cast<std::size_t>(l)];
    }
  }
  return out;
}

}  // namespace vitalclust::prognosis
