#include "vitalclust/cluster/kshape.hpp"

#include <limits>
#include <stdexcept>

#include "vitalclust/cluster/sbd.hpp"
#include "vitalclust/core/hash.hpp"
#include "vitalclust/core/parallel.hpp"

namespace vitalclust::cluster {

namespace {

Eigen::VectorXd power_start(Eigen::Index t) {
  Eigen::VectorXd v(t);
  for (Eigen::Index i = 0; i < t; ++i)
    v[i] = static_cast<double>(hash64(0x6b736861u, static_cast<std::uint64_t>(i)) >> 11) *
               0x1p-53 -
           0.5;
  return v / v.norm();
}

struct Fit {
  std::vector<int> labels;
  std::vector<VitalGrid> shapes;
  double inertia = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
};

// One shape refinement: per channel, the dominant eigenvector of the
// centered alignment matrix of the members, each member aligned by its
// shared multivariate best shift against the current shape.
VitalGrid extract_shape(const std::vector<const VitalGrid*>& members,
                        const VitalGrid& current) {
  const Eigen::Index t = current.cols();
  std::vector<int> shifts(members.size());
  for (std::size_t m = 0; m < members.size(); ++m)
    shifts[m] = mncc_scan(current, *members[m]).best_shift;

  VitalGrid shape(kNumChannels, t);
  const Eigen::MatrixXd q =
      Eigen::MatrixXd::Identity(t, t) -
      Eigen::MatrixXd::Constant(t, t, 1.0 / static_cast<double>(t));
  for (int c = 0; c < kNumChannels; ++c) {
    Eigen::MatrixXd m_sum = Eigen::MatrixXd::Zero(t, t);
    Eigen::VectorXd mean_aligned = Eigen::VectorXd::Zero(t);
    for (std::size_t m = 0; m < members.size(); ++m) {
      const Eigen::VectorXd x =
          shift_series(members[m]->row(c).transpose(), shifts[m]);
      m_sum.noalias() += x * x.transpose();
      mean_aligned += x;
    }
    mean_aligned /= static_cast<double>(members.size());
    const Eigen::VectorXd v = dominant_eigenvector(q * m_sum * q);
    Eigen::VectorXd row = stats::znorm(v);
    if (stats::pearson(row, mean_aligned) < 0.0) row = -row;
    shape.row(c) = row.transpose();
  }
  return shape;
}

}  // namespace

Eigen::VectorXd dominant_eigenvector(const Eigen::MatrixXd& s, double tol,
                                     int max_iter) {
  const Eigen::Index t = s.rows();
  Eigen::VectorXd v = power_start(t);
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd next = s * v;
    const double norm = next.norm();
    if (norm < 1e-300) return Eigen::VectorXd::Zero(t);
    next /= norm;
    const double delta = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (delta < tol) break;
  }
  return v;
}

ClusterModel kshape_fit(const std::vector<PatientSeries>& series,
                        const ClusterParams& params, int workers) {
  const auto n = series.size();
  const int k = params.k;
  if (k < 1) throw std::invalid_argument("kshape: k must be >= 1");
  if (static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("kshape: k exceeds patient count");
  const auto t = series.front().timesteps();
  for (const auto& s : series)
    if (s.timesteps() != t)
      throw std::invalid_argument("kshape: unequal series lengths");

  std::vector<VitalGrid> grids(n);
  std::vector<std::uint64_t> id_hashes(n);
  for (std::size_t i = 0; i < n; ++i) {
    grids[i] = znorm_grid(series[i].grid);
    id_hashes[i] = hash64_str(series[i].patient_id);
  }

  const auto run_restart = [&](std::uint64_t restart_seed) {
    Fit fit;
    fit.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      fit.labels[i] =
          static_cast<int>(hash64(restart_seed, id_hashes[i]) % static_cast<std::uint64_t>(k));

    // Make every initial cluster non-empty: hand the smallest-id patients
    // of over-full clusters to the empty ones, in cluster order.
    for (int c = 0; c < k; ++c) {
      if (std::count(fit.labels.begin(), fit.labels.end(), c) > 0) continue;
      std::size_t donor = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::count(fit.labels.begin(), fit.labels.end(), fit.labels[i]) < 2)
          continue;
        if (donor == n || series[i].patient_id < series[donor].patient_id) donor = i;
      }
      fit.labels[donor] = c;
    }

    fit.shapes.assign(static_cast<std::size_t>(k), VitalGrid::Zero(kNumChannels, t));
    std::vector<double> dist(n);
    for (int iter = 0; iter < params.max_iter; ++iter) {
      for (int c = 0; c < k; ++c) {
        std::vector<const VitalGrid*> members;
        for (std::size_t i = 0; i < n; ++i)
          if (fit.labels[i] == c) members.push_back(&grids[i]);
        if (!members.empty())
          fit.shapes[static_cast<std::size_t>(c)] =
              extract_shape(members, fit.shapes[static_cast<std::size_t>(c)]);
      }

      std::vector<int> next(n);
      parallel_for(n, workers, [&](std::size_t i) {
        int best = 0;
        double best_d = multivariate_sbd(grids[i], fit.shapes[0]);
        for (int c = 1; c < k; ++c) {
          const double d =
              multivariate_sbd(grids[i], fit.shapes[static_cast<std::size_t>(c)]);
          if (d < best_d) {
            best_d = d;
            best = c;
          }
        }
        next[i] = best;
        dist[i] = best_d;
      });

      // Repair empty clusters with the worst-fitting donatable patient.
      for (int c = 0; c < k; ++c) {
        if (std::count(next.begin(), next.end(), c) > 0) continue;
        std::size_t far = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (std::count(next.begin(), next.end(), next[i]) < 2) continue;
          if (far == n || dist[i] > dist[far] ||
              (dist[i] == dist[far] && series[i].patient_id < series[far].patient_id))
            far = i;
        }
        if (far == n) throw std::runtime_error("kshape: cannot repair empty cluster");
        next[far] = c;
        dist[far] = 0.0;
      }

      double inertia = 0.0;
      for (std::size_t i = 0; i < n; ++i) inertia += dist[i];
      fit.trace.push_back(inertia);
      const bool stable = next == fit.labels;
      fit.labels = std::move(next);
      fit.inertia = inertia;
      if (stable) break;
    }
    return fit;
  };

  Fit best;
  for (int r = 0; r < std::max(1, params.n_init); ++r) {
    Fit fit = run_restart(hash64(params.seed, static_cast<std::uint64_t>(r)));
    if (fit.inertia < best.inertia) best = std::move(fit);
  }

  ClusterModel model;
  model.algorithm = Algorithm::KShape;
  model.k = k;
  model.seed = params.seed;
  model.shapes = std::move(best.shapes);
  model.inertia = best.inertia;
  model.inertia_trace = std::move(best.trace);
  model.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    model.labels.emplace_back(series[i].patient_id, best.labels[i]);
  return model;
}

}  // namespace vitalclust::cluster
