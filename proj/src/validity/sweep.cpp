#include "vitalclust/validity/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <map>
#include <stdexcept>

#include "vitalclust/cluster/dbscan.hpp"
#include "vitalclust/cluster/kmeans.hpp"
#include "vitalclust/cluster/kmedoids.hpp"
#include "vitalclust/cluster/kshape.hpp"
#include "vitalclust/core/textio.hpp"
#include "vitalclust/validity/indices.hpp"

namespace vitalclust::validity {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Feature-space metrics for one labeling; negative labels (noise) are
// dropped first. Undefined indices come back NaN.
void score_row(const Eigen::MatrixXd& x, const std::vector<int>& labels,
               ValidityRow& row, bool keep_inertia) {
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0) keep.push_back(static_cast<Eigen::Index>(i));

  row.chi = kNan;
  row.dbi = kNan;
  if (keep.empty()) {
    if (!keep_inertia) row.inertia = kNan;
    return;
  }

  Eigen::MatrixXd xs(static_cast<Eigen::Index>(keep.size()), x.cols());
  std::vector<int> ls(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    xs.row(static_cast<Eigen::Index>(i)) = x.row(keep[i]);
    ls[i] = labels[static_cast<std::size_t>(keep[i])];
  }

  if (!keep_inertia) row.inertia = inertia(xs, ls, cluster_means(xs, ls));
  try {
    row.chi = chi(xs, ls);
  } catch (const std::invalid_argument&) {
  }
  try {
    row.dbi = dbi(xs, ls);
  } catch (const std::invalid_argument&) {
  }
}

// CHI descending, DBI ascending, NaN after everything.
bool better_metrics(const ValidityRow& a, const ValidityRow& b) {
  const bool a_chi = !std::isnan(a.chi), b_chi = !std::isnan(b.chi);
  if (a_chi != b_chi) return a_chi;
  if (a_chi && a.chi != b.chi) return a.chi > b.chi;
  const bool a_dbi = !std::isnan(a.dbi), b_dbi = !std::isnan(b.dbi);
  if (a_dbi != b_dbi) return a_dbi;
  if (a_dbi && a.dbi != b.dbi) return a.dbi < b.dbi;
  return false;
}

}  // namespace

ValidityReport sweep(const features::FeatureMatrix& matrix,
                     const std::vector<PatientSeries>& series,
                     const SweepOptions& options, int workers) {
  if (options.algorithms.empty())
    throw std::invalid_argument("sweep: no algorithms requested");
  if (options.k_min < 1 || options.k_max < options.k_min)
    throw std::invalid_argument("sweep: bad k range");

  // Canonical enum order, deduplicated.
  std::vector<cluster::Algorithm> algos;
  for (const auto a :
       {cluster::Algorithm::KMeans, cluster::Algorithm::KMedoids,
        cluster::Algorithm::KShape, cluster::Algorithm::DBSCAN})
    if (std::find(options.algorithms.begin(), options.algorithms.end(), a) !=
        options.algorithms.end())
      algos.push_back(a);

  ValidityReport report;
  struct Candidate {
    cluster::Algorithm algorithm;
    std::size_t row_index;
  };
  std::vector<Candidate> candidates;

  for (const auto algo : algos) {
    cluster::ClusterParams params = options.base;
    params.algorithm = algo;

    if (algo == cluster::Algorithm::DBSCAN) {
      const auto model = cluster::dbscan_fit(matrix, params, workers);
      ValidityRow row;
      row.algorithm = algo;
      row.k = model.k;
      score_row(matrix.values, model.label_values(), row, false);
      report.rows.push_back(row);
      candidates.push_back({algo, report.rows.size() - 1});
      continue;
    }

    if (algo == cluster::Algorithm::KShape && series.empty())
      throw std::invalid_argument("sweep: kshape needs raw series");

    std::map<int, double> curve;
    std::map<int, std::size_t> row_of_k;
    for (int k = options.k_min; k <= options.k_max; ++k) {
      params.k = k;
      cluster::ClusterModel model;
      switch (algo) {
        case cluster::Algorithm::KMeans:
          model = cluster::kmeans_fit(matrix, params, workers);
          break;
        case cluster::Algorithm::KMedoids:
          model = cluster::kmedoids_fit(matrix, params, workers);
          break;
        case cluster::Algorithm::KShape:
          model = cluster::kshape_fit(series, params, workers);
          break;
        case cluster::Algorithm::DBSCAN:
          break;  // handled above
      }

      ValidityRow row;
      row.algorithm = algo;
      row.k = k;
      const bool sbd_inertia = algo == cluster::Algorithm::KShape;
      if (sbd_inertia) row.inertia = model.inertia;
      score_row(matrix.values, model.label_values(), row, sbd_inertia);
      curve[k] = row.inertia;
      row_of_k[k] = report.rows.size();
      report.rows.push_back(row);
    }

    int elbow_k;
    if (curve.size() >= 3) {
      elbow_k = elbow_select_k(curve);
    } else {
      elbow_k = options.k_min;
      for (int k = options.k_min + 1; k <= options.k_max; ++k)
        if (better_metrics(report.rows[row_of_k[k]], report.rows[row_of_k[elbow_k]]))
          elbow_k = k;
    }
    candidates.push_back({algo, row_of_k[elbow_k]});
  }

  std::size_t winner = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c)
    if (better_metrics(report.rows[candidates[c].row_index],
                       report.rows[candidates[winner].row_index]))
      winner = c;

  const auto& chosen_row = report.rows[candidates[winner].row_index];
  report.chosen_algorithm = chosen_row.algorithm;
  report.chosen_k = chosen_row.k;
  report.rows[candidates[winner].row_index].chosen = true;
  return report;
}

std::string report_to_csv(const ValidityReport& report) {
  std::string out = "algorithm,k,inertia,chi,dbi,chosen\n";
  for (const auto& row : report.rows) {
    out += std::string(cluster::algorithm_name(row.algorithm));
    out += ',';
    out += std::to_string(row.k);
    out += ',';
    out += textio::fmt_double(row.inertia);
    out += ',';
    out += textio::fmt_double(row.chi);
    out += ',';
    out += textio::fmt_double(row.dbi);
    out += ',';
    out += row.chosen ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string report_to_json(const ValidityReport& report) {
  nlohmann::json doc;
  doc["chosen_algorithm"] = std::string(cluster::algorithm_name(report.chosen_algorithm));
  doc["chosen_k"] = report.chosen_k;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["algorithm"] = std::string(cluster::algorithm_name(row.algorithm));
    r["k"] = row.k;
    r["inertia"] = row.inertia;
    r["chi"] = row.chi;
    r["dbi"] = row.dbi;
    r["chosen"] = row.chosen;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void write_report(const std::string& csv_path, const std::string& json_path,
                  const ValidityReport& report) {
  textio::write_text_file(csv_path, report_to_csv(report));
  textio::write_text_file(json_path, report_to_json(report));
}

}  // namespace vitalclust::validity
