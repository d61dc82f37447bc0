#include "vitalclust/cluster/kmedoids.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "vitalclust/core/parallel.hpp"

namespace vitalclust::cluster {

namespace {

Eigen::MatrixXd pairwise_euclidean(const Eigen::MatrixXd& x, int workers) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd d(n, n);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    d(ii, ii) = 0.0;
    for (Eigen::Index j = 0; j < ii; ++j) {
      const double v = (x.row(ii) - x.row(j)).norm();
      d(ii, j) = v;
    }
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i);
  return d;
}

// Costs accumulate in ascending patient-id order (the id_order argument),
// so the fit is bit-for-bit independent of the input row order.
double total_cost(const Eigen::MatrixXd& d, const std::vector<Eigen::Index>& medoids,
                  const std::vector<Eigen::Index>& id_order) {
  double cost = 0.0;
  for (const Eigen::Index i : id_order) {
    double best = std::numeric_limits<double>::infinity();
    for (const Eigen::Index m : medoids) best = std::min(best, d(i, m));
    cost += best;
  }
  return cost;
}

}  // namespace

ClusterModel kmedoids_fit(const features::FeatureMatrix& matrix,
                          const ClusterParams& params, int workers) {
  const Eigen::Index n = matrix.rows();
  const int k = params.k;
  if (k < 1) throw std::invalid_argument("kmedoids: k must be >= 1");
  if (static_cast<Eigen::Index>(k) > n)
    throw std::invalid_argument("kmedoids: k exceeds patient count");
  const auto& ids = matrix.patient_ids;

  const Eigen::MatrixXd d = pairwise_euclidean(matrix.values, workers);

  // Prefer `a` over `b` on equal cost when its patient id is smaller.
  const auto id_less = [&](Eigen::Index a, Eigen::Index b) {
    return ids[static_cast<std::size_t>(a)] < ids[static_cast<std::size_t>(b)];
  };

  std::vector<Eigen::Index> id_order(static_cast<std::size_t>(n));
  std::iota(id_order.begin(), id_order.end(), 0);
  std::sort(id_order.begin(), id_order.end(), id_less);

  // BUILD: first medoid minimises the summed distance to everyone.
  std::vector<Eigen::Index> medoids;
  std::vector<char> is_medoid(static_cast<std::size_t>(n), 0);
  {
    Eigen::Index best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      for (const Eigen::Index j : id_order) c += d(i, j);
      if (best < 0 || c < best_cost || (c == best_cost && id_less(i, best))) {
        best_cost = c;
        best = i;
      }
    }
    medoids.push_back(best);
    is_medoid[static_cast<std::size_t>(best)] = 1;
  }

  Eigen::VectorXd nearest = d.col(medoids[0]);
  while (static_cast<int>(medoids.size()) < k) {
    Eigen::Index best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (Eigen::Index cand = 0; cand < n; ++cand) {
      if (is_medoid[static_cast<std::size_t>(cand)]) continue;
      double gain = 0.0;
      for (const Eigen::Index i : id_order)
        gain += std::max(0.0, nearest[i] - d(i, cand));
      if (gain > best_gain || (gain == best_gain && best >= 0 && id_less(cand, best))) {
        best_gain = gain;
        best = cand;
      }
    }
    medoids.push_back(best);
    is_medoid[static_cast<std::size_t>(best)] = 1;
    nearest = nearest.cwiseMin(d.col(best));
  }

  // SWAP: apply the single best strictly-improving exchange, repeat to
  // convergence. Tie order: smaller outgoing id, then smaller incoming id.
  std::vector<double> swap_trace;
  double cost = total_cost(d, medoids, id_order);
  bool improved = true;
  while (improved) {
    improved = false;
    double best_cost = cost;
    std::size_t best_out = 0;
    Eigen::Index best_in = -1;
    for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
      for (Eigen::Index cand = 0; cand < n; ++cand) {
        if (is_medoid[static_cast<std::size_t>(cand)]) continue;
        std::vector<Eigen::Index> trial = medoids;
        trial[mi] = cand;
        const double c = total_cost(d, trial, id_order);
        const bool better =
            c < best_cost ||
            (best_in >= 0 && c == best_cost &&
             (id_less(medoids[mi], medoids[best_out]) ||
              (medoids[mi] == medoids[best_out] && id_less(cand, best_in))));
        if (better) {
          best_cost = c;
          best_out = mi;
          best_in = cand;
        }
      }
    }
    if (best_in >= 0 && best_cost < cost) {
      is_medoid[static_cast<std::size_t>(medoids[best_out])] = 0;
      is_medoid[static_cast<std::size_t>(best_in)] = 1;
      medoids[best_out] = best_in;
      cost = best_cost;
      swap_trace.push_back(cost);
      improved = true;
    }
  }

  // Cluster indices follow ascending medoid patient id.
  std::sort(medoids.begin(), medoids.end(),
            [&](Eigen::Index a, Eigen::Index b) { return id_less(a, b); });

  ClusterModel model;
  model.algorithm = Algorithm::KMedoids;
  model.k = k;
  model.seed = params.seed;
  model.inertia = cost;
  model.swap_cost_trace = std::move(swap_trace);
  model.medoids = Eigen::MatrixXd(k, matrix.cols());
  for (int c = 0; c < k; ++c) {
    model.medoid_ids.push_back(ids[static_cast<std::size_t>(medoids[static_cast<std::size_t>(c)])]);
    model.medoids.row(c) = matrix.values.row(medoids[static_cast<std::size_t>(c)]);
  }
  model.labels.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    double best_d = d(i, medoids[0]);
    for (int c = 1; c < k; ++c) {
      const double v = d(i, medoids[static_cast<std::size_t>(c)]);
      if (v < best_d) {
        best_d = v;
        best = c;
      }
    }
    model.labels.emplace_back(ids[static_cast<std::size_t>(i)], best);
  }
  return model;
}

}  // namespace vitalclust::cluster
