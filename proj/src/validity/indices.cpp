#include "vitalclust/validity/indices.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace vitalclust::validity {

namespace {

int infer_k(const std::vector<int>& labels) {
  if (labels.empty()) throw std::invalid_argument("labels are empty");
  int k = 0;
  for (const int l : labels) {
    if (l < 0) throw std::invalid_argument("negative label");
    k = std::max(k, l + 1);
  }
  return k;
}

std::vector<Eigen::Index> cluster_sizes(const std::vector<int>& labels, int k) {
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(k), 0);
  for (const int l : labels) ++sizes[static_cast<std::size_t>(l)];
  for (int c = 0; c < k; ++c)
    if (sizes[static_cast<std::size_t>(c)] == 0)
      throw std::invalid_argument("cluster " + std::to_string(c) + " is empty");
  return sizes;
}

}  // namespace

Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& x, const std::vector<int>& labels) {
  if (static_cast<std::size_t>(x.rows()) != labels.size())
    throw std::invalid_argument("labels/matrix row mismatch");
  const int k = infer_k(labels);
  const auto sizes = cluster_sizes(labels, k);
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(k, x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    means.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
  for (int c = 0; c < k; ++c)
    means.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
  return means;
}

double inertia(const Eigen::MatrixXd& x, const std::vector<int>& labels,
               const Eigen::MatrixXd& centers) {
  if (static_cast<std::size_t>(x.rows()) != labels.size())
    throw std::invalid_argument("labels/matrix row mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    if (l < 0 || l >= centers.rows())
      throw std::invalid_argument("label out of range of centers");
    total += (x.row(i) - centers.row(l)).squaredNorm();
  }
  return total;
}

double chi(const Eigen::MatrixXd& x, const std::vector<int>& labels) {
  const int k = infer_k(labels);
  const auto n = x.rows();
  if (k < 2) throw std::invalid_argument("chi undefined for k < 2");
  if (n <= k) throw std::invalid_argument("chi undefined for n <= k");
  const auto sizes = cluster_sizes(labels, k);
  const Eigen::MatrixXd means = cluster_means(x, labels);
  const Eigen::RowVectorXd global = x.colwise().mean();
  double b = 0.0;
  for (int c = 0; c < k; ++c)
    b += static_cast<double>(sizes[static_cast<std::size_t>(c)]) *
         (means.row(c) - global).squaredNorm();
  const double w = inertia(x, labels, means);
  return (b / (k - 1)) / (w / static_cast<double>(n - k));
}

double dbi(const Eigen::MatrixXd& x, const std::vector<int>& labels) {
  const int k = infer_k(labels);
  if (k < 2) throw std::invalid_argument("dbi undefined for k < 2");
  const auto sizes = cluster_sizes(labels, k);
  const Eigen::MatrixXd means = cluster_means(x, labels);

  Eigen::VectorXd scatter = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    scatter[l] += (x.row(i) - means.row(l)).norm();
  }
  for (int c = 0; c < k; ++c)
    scatter[c] /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);

  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const double m = (means.row(i) - means.row(j)).norm();
      if (m == 0.0)
        throw std::invalid_argument("dbi undefined: clusters " + std::to_string(i) +
                                    " and " + std::to_string(j) +
                                    " have coincident centroids");
      worst = std::max(worst, (scatter[i] + scatter[j]) / m);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

double ari(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("ari: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("ari: need at least 2 items");

  // Compact the label alphabets, noise labels included.
  std::map<int, int> amap, bmap;
  for (const int l : a) amap.emplace(l, static_cast<int>(amap.size()));
  for (const int l : b) bmap.emplace(l, static_cast<int>(bmap.size()));

  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(amap.size()), static_cast<Eigen::Index>(bmap.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    table(amap.at(a[i]), bmap.at(b[i])) += 1.0;

  const auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
  double sum_ij = 0.0;
  for (Eigen::Index i = 0; i < table.rows(); ++i)
    for (Eigen::Index j = 0; j < table.cols(); ++j) sum_ij += pairs(table(i, j));
  double sum_a = 0.0;
  for (Eigen::Index i = 0; i < table.rows(); ++i) sum_a += pairs(table.row(i).sum());
  double sum_b = 0.0;
  for (Eigen::Index j = 0; j < table.cols(); ++j) sum_b += pairs(table.col(j).sum());

  const double expected = sum_a * sum_b / pairs(static_cast<double>(a.size()));
  const double maximum = 0.5 * (sum_a + sum_b);
  if (maximum == expected) return 1.0;  // both partitions trivial
  return (sum_ij - expected) / (maximum - expected);
}

int elbow_select_k(const std::map<int, double>& inertia_by_k) {
  if (inertia_by_k.size() < 3)
    throw std::invalid_argument("elbow needs at least three consecutive k");
  const int k_min = inertia_by_k.begin()->first;
  const int k_max = inertia_by_k.rbegin()->first;
  if (static_cast<std::size_t>(k_max - k_min + 1) != inertia_by_k.size())
    throw std::invalid_argument("elbow needs consecutive k coverage");

  int best_k = k_min + 1;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = k_min + 1; k < k_max; ++k) {
    const double d2 = (inertia_by_k.at(k - 1) - inertia_by_k.at(k)) -
                      (inertia_by_k.at(k) - inertia_by_k.at(k + 1));
    if (d2 > best) {
      best = d2;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace vitalclust::validity
