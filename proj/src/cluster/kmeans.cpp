#include "vitalclust/cluster/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "vitalclust/core/hash.hpp"
#include "vitalclust/core/parallel.hpp"
#include "vitalclust/core/rng.hpp"

namespace vitalclust::cluster {

namespace {

struct Fit {
  std::vector<int> labels;
  Eigen::MatrixXd centers;
  double inertia = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
};

// Categorical draw proportional to weights via the Gumbel-max trick, with
// the noise keyed to (step seed, patient id). Position-independent: the
// same patients give the same draw in any row order.
Eigen::Index weighted_pick(const Eigen::VectorXd& weights,
                           const std::vector<std::uint64_t>& id_hashes,
                           const std::vector<std::string>& ids,
                           std::uint64_t step_seed) {
  const double total = weights.sum();
  Eigen::Index best = -1;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    const double w = total > 0.0 ? weights[i] : 1.0;
    if (w <= 0.0) continue;
    const double score =
        std::log(w) +
        gumbel_from_hash(hash64(step_seed, id_hashes[static_cast<std::size_t>(i)]));
    if (score > best_score ||
        (score == best_score && best >= 0 &&
         ids[static_cast<std::size_t>(i)] < ids[static_cast<std::size_t>(best)])) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

Eigen::MatrixXd kmeanspp_centers(const Eigen::MatrixXd& x,
                                 const std::vector<std::uint64_t>& id_hashes,
                                 const std::vector<std::string>& ids, int k,
                                 std::uint64_t restart_seed) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers(k, x.cols());
  Eigen::VectorXd d2 = Eigen::VectorXd::Ones(n);  // uniform first pick
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);

  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd weights = d2;
    for (Eigen::Index i = 0; i < n; ++i)
      if (chosen[static_cast<std::size_t>(i)]) weights[i] = 0.0;
    const Eigen::Index pick = weighted_pick(
        weights, id_hashes, ids, hash64(restart_seed, static_cast<std::uint64_t>(c)));
    if (pick < 0) throw std::runtime_error("kmeans++: no candidate left");
    chosen[static_cast<std::size_t>(pick)] = 1;
    centers.row(c) = x.row(pick);
    if (c + 1 == k) break;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = (x.row(i) - centers.row(c)).squaredNorm();
      if (c == 0 || d < d2[i]) d2[i] = d;
    }
  }
  return centers;
}

// Nearest center, ties to the lowest index.
void assign_step(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers,
                 std::vector<int>& labels, Eigen::VectorXd& dist2, int workers) {
  parallel_for(static_cast<std::size_t>(x.rows()), workers, [&](std::size_t i) {
    const auto row = x.row(static_cast<Eigen::Index>(i));
    int best = 0;
    double best_d = (row - centers.row(0)).squaredNorm();
    for (int c = 1; c < centers.rows(); ++c) {
      const double d = (row - centers.row(c)).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = best;
    dist2[static_cast<Eigen::Index>(i)] = best_d;
  });
}

// Reseeds each empty cluster with the point farthest from its centroid
// (ties to the smaller patient id), adjusting dist2 in place.
void repair_empty_clusters(const Eigen::MatrixXd& x, const std::vector<std::string>& ids,
                           int k, std::vector<int>& labels,
                           Eigen::MatrixXd& centers, Eigen::VectorXd& dist2) {
  const Eigen::Index n = x.rows();
  for (int c = 0; c < k; ++c) {
    if (std::find(labels.begin(), labels.end(), c) != labels.end()) continue;
    Eigen::Index far = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto si = static_cast<std::size_t>(i);
      if (std::count(labels.begin(), labels.end(), labels[si]) < 2) continue;
      if (far < 0 || dist2[i] > dist2[far] ||
          (dist2[i] == dist2[far] && ids[si] < ids[static_cast<std::size_t>(far)]))
        far = i;
    }
    if (far < 0) throw std::runtime_error("kmeans: cannot repair empty cluster");
    labels[static_cast<std::size_t>(far)] = c;
    centers.row(c) = x.row(far);
    dist2[far] = 0.0;
  }
}

Fit lloyd(const Eigen::MatrixXd& x, const std::vector<std::uint64_t>& id_hashes,
          const std::vector<std::string>& ids,
          const std::vector<Eigen::Index>& id_order, const ClusterParams& params,
          std::uint64_t restart_seed, int workers) {
  const Eigen::Index n = x.rows();
  const int k = params.k;

  // All accumulations run in ascending patient-id order so permuting the
  // input rows cannot change a single rounded bit of the fit.
  const auto ordered_sum = [&](const Eigen::VectorXd& v) {
    double s = 0.0;
    for (const Eigen::Index i : id_order) s += v[i];
    return s;
  };

  Fit fit;
  fit.centers = kmeanspp_centers(x, id_hashes, ids, k, restart_seed);
  fit.labels.assign(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd dist2(n);

  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < params.max_iter; ++iter) {
    const std::vector<int> old_labels = fit.labels;
    assign_step(x, fit.centers, fit.labels, dist2, workers);
    repair_empty_clusters(x, ids, k, fit.labels, fit.centers, dist2);

    const double inertia = ordered_sum(dist2);
    fit.trace.push_back(inertia);
    if (inertia > prev_inertia + 1e-9 * std::max(1.0, prev_inertia))
      throw std::logic_error("kmeans: inertia increased across iterations");

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (const Eigen::Index i : id_order) {
      sums.row(fit.labels[static_cast<std::size_t>(i)]) += x.row(i);
      counts[fit.labels[static_cast<std::size_t>(i)]] += 1.0;
    }
    for (int c = 0; c < k; ++c)
      if (counts[c] > 0) fit.centers.row(c) = sums.row(c) / counts[c];

    const bool converged =
        fit.labels == old_labels ||
        (std::isfinite(prev_inertia) &&
         (prev_inertia - inertia) < params.tol * std::max(prev_inertia, 1e-300));
    prev_inertia = inertia;
    if (converged && iter > 0) break;
  }

  // Final assignment against the converged centers; repair keeps the
  // k-non-empty guarantee even for degenerate duplicate-heavy inputs.
  assign_step(x, fit.centers, fit.labels, dist2, workers);
  repair_empty_clusters(x, ids, k, fit.labels, fit.centers, dist2);
  fit.inertia = ordered_sum(dist2);
  return fit;
}

}  // namespace

ClusterModel kmeans_fit(const features::FeatureMatrix& matrix,
                        const ClusterParams& params, int workers) {
  const Eigen::Index n = matrix.rows();
  if (params.k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (static_cast<Eigen::Index>(params.k) > n)
    throw std::invalid_argument("kmeans: k exceeds patient count");

  std::vector<std::uint64_t> id_hashes;
  id_hashes.reserve(matrix.patient_ids.size());
  for (const auto& id : matrix.patient_ids) id_hashes.push_back(hash64_str(id));

  std::vector<Eigen::Index> id_order(static_cast<std::size_t>(n));
  std::iota(id_order.begin(), id_order.end(), 0);
  std::sort(id_order.begin(), id_order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return matrix.patient_ids[static_cast<std::size_t>(a)] <
           matrix.patient_ids[static_cast<std::size_t>(b)];
  });

  Fit best;
  int best_restart = -1;
  for (int r = 0; r < std::max(1, params.n_init); ++r) {
    Fit fit = lloyd(matrix.values, id_hashes, matrix.patient_ids, id_order, params,
                    hash64(params.seed, static_cast<std::uint64_t>(r)), workers);
    if (fit.inertia < best.inertia) {
      best = std::move(fit);
      best_restart = r;
    }
  }
  (void)best_restart;

  ClusterModel model;
  model.algorithm = Algorithm::KMeans;
  model.k = params.k;
  model.seed = params.seed;
  model.centers = std::move(best.centers);
  model.inertia = best.inertia;
  model.inertia_trace = std::move(best.trace);
  model.labels.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    model.labels.emplace_back(matrix.patient_ids[static_cast<std::size_t>(i)],
                              best.labels[static_cast<std::size_t>(i)]);
  return model;
}

}  // namespace vitalclust::cluster
