#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vitalclust/cluster/params.hpp"
#include "vitalclust/core/types.hpp"
#include "vitalclust/features/matrix.hpp"

namespace vitalclust::validity {

struct ValidityRow {
  cluster::Algorithm algorithm = cluster::Algorithm::KMeans;
  int k = 0;           // swept k; discovered cluster count for DBSCAN
  double inertia = 0;  // feature-space SSE; summed multivariate SBD for kshape
  double chi = 0;      // NaN when undefined (k < 2 after noise removal, ...)
  double dbi = 0;      // NaN when undefined
  bool chosen = false;
};

struct ValidityReport {
  std::vector<ValidityRow> rows;  // (algorithm enum order, ascending k)
  cluster::Algorithm chosen_algorithm = cluster::Algorithm::KMeans;
  int chosen_k = 0;
};

struct SweepOptions {
  std::vector<cluster::Algorithm> algorithms;
  int k_min = 2;
  int k_max = 6;
  cluster::ClusterParams base;  // seed / n_init / tol / eps / min_pts
};

// Fits every (algorithm, k) pair — DBSCAN once, its k being the discovered
// cluster count — and records inertia, CHI, DBI per row. Each centroid
// algorithm gets its elbow k from its own inertia curve (with fewer than
// three swept k: best CHI, then lowest DBI, then smallest k). Algorithms
// are then ranked at their elbow k by CHI descending, DBI ascending, enum
// order; the winner fills chosen_algorithm/chosen_k and its row is marked.
//
// CHI/DBI are always computed on the feature matrix (kshape clusters raw
// grids but is scored in feature space so rows are comparable). DBSCAN
// noise points are excluded from its inertia/CHI/DBI; indices undefined on
// what remains are recorded as NaN and rank after every defined value.
ValidityReport sweep(const features::FeatureMatrix& matrix,
                     const std::vector<PatientSeries>& series,
                     const SweepOptions& options, int workers = 1);

std::string report_to_csv(const ValidityReport& report);
std::string report_to_json(const ValidityReport& report);
void write_report(const std::string& csv_path, const std::string& json_path,
                  const ValidityReport& report);

}  // namespace vitalclust::validity
