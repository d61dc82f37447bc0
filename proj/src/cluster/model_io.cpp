#include "vitalclust/cluster/model_io.hpp"

#include <json.hpp>
#include <stdexcept>

#include "vitalclust/core/textio.hpp"

namespace vitalclust::cluster {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, Eigen::Index cols_hint = -1) {
  const auto nr = static_cast<Eigen::Index>(rows.size());
  Eigen::Index nc = cols_hint;
  if (nr > 0) nc = static_cast<Eigen::Index>(rows.at(0).size());
  if (nc < 0) nc = 0;
  Eigen::MatrixXd m(nr, nc);
  for (Eigen::Index i = 0; i < nr; ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != nc)
      throw std::invalid_argument("model json: ragged matrix");
    for (Eigen::Index j = 0; j < nc; ++j)
      m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return m;
}

}  // namespace

std::string model_to_json(const ClusterModel& model) {
  json doc;
  doc["format"] = "vitalclust-model";
  doc["version"] = 1;
  doc["algorithm"] = std::string(algorithm_name(model.algorithm));
  doc["k"] = model.k;
  doc["seed"] = model.seed;
  doc["selected_features"] = model.selected_features;

  json norm = json::array();
  if (!model.normalization.empty() &&
      model.normalization.size() != model.selected_features.size())
    throw std::invalid_argument("model json: normalization/feature count mismatch");
  for (std::size_t i = 0; i < model.normalization.size(); ++i)
    norm.push_back({{"feature", model.selected_features[i]},
                    {"mean", model.normalization[i].mean},
                    {"std", model.normalization[i].std}});
  doc["normalization"] = std::move(norm);

  switch (model.algorithm) {
    case Algorithm::KMeans:
      doc["centers"] = matrix_to_json(model.centers);
      break;
    case Algorithm::KMedoids:
      doc["medoid_ids"] = model.medoid_ids;
      doc["medoids"] = matrix_to_json(model.medoids);
      break;
    case Algorithm::KShape: {
      json shapes = json::array();
      for (const auto& s : model.shapes) shapes.push_back(matrix_to_json(s));
      doc["shapes"] = std::move(shapes);
      break;
    }
    case Algorithm::DBSCAN:
      doc["core_points"] = matrix_to_json(model.core_points);
      doc["core_labels"] = model.core_labels;
      doc["eps"] = model.eps;
      doc["min_pts"] = model.min_pts;
      break;
  }

  doc["inertia"] = model.inertia;
  doc["inertia_trace"] = model.inertia_trace;
  doc["swap_cost_trace"] = model.swap_cost_trace;

  json labels = json::array();
  for (const auto& [id, l] : model.labels) labels.push_back({id, l});
  doc["labels"] = std::move(labels);
  return doc.dump(2) + "\n";
}

ClusterModel model_from_json(const std::string& text) {
  const json doc = json::parse(text);
  if (doc.at("format").get<std::string>() != "vitalclust-model")
    throw std::invalid_argument("model json: unexpected format tag");

  ClusterModel model;
  const auto alg = algorithm_from_name(doc.at("algorithm").get<std::string>());
  if (!alg) throw std::invalid_argument("model json: unknown algorithm");
  model.algorithm = *alg;
  model.k = doc.at("k").get<int>();
  model.seed = doc.at("seed").get<std::uint64_t>();
  model.selected_features =
      doc.at("selected_features").get<std::vector<std::string>>();

  for (const auto& entry : doc.at("normalization")) {
    features::ColumnStat st;
    st.mean = entry.at("mean").get<double>();
    st.std = entry.at("std").get<double>();
    model.normalization.push_back(st);
  }
  if (!model.normalization.empty() &&
      model.normalization.size() != model.selected_features.size())
    throw std::invalid_argument("model json: normalization/feature count mismatch");

  switch (model.algorithm) {
    case Algorithm::KMeans:
      model.centers = matrix_from_json(doc.at("centers"));
      break;
    case Algorithm::KMedoids:
      model.medoid_ids = doc.at("medoid_ids").get<std::vector<std::string>>();
      model.medoids = matrix_from_json(doc.at("medoids"));
      break;
    case Algorithm::KShape:
      for (const auto& s : doc.at("shapes")) {
        const Eigen::MatrixXd g = matrix_from_json(s);
        if (g.rows() != kNumChannels)
          throw std::invalid_argument("model json: shape channel count");
        model.shapes.emplace_back(g);
      }
      break;
    case Algorithm::DBSCAN:
      model.core_points = matrix_from_json(doc.at("core_points"));
      model.core_labels = doc.at("core_labels").get<std::vector<int>>();
      model.eps = doc.at("eps").get<double>();
      model.min_pts = doc.at("min_pts").get<int>();
      break;
  }

  model.inertia = doc.at("inertia").get<double>();
  model.inertia_trace = doc.at("inertia_trace").get<std::vector<double>>();
  model.swap_cost_trace = doc.at("swap_cost_trace").get<std::vector<double>>();
  for (const auto& entry : doc.at("labels"))
    model.labels.emplace_back(entry.at(0).get<std::string>(),
                              entry.at(1).get<int>());
  return model;
}

void write_model_json(const std::string& path, const ClusterModel& model) {
  textio::write_text_file(path, model_to_json(model));
}

ClusterModel read_model_json(const std::string& path) {
  return model_from_json(textio::read_text_file(path));
}

void write_labels_csv(const std::string& path,
                      const std::vector<std::pair<std::string, int>>& labels) {
  std::string out = "patient_id,cluster\n";
  for (const auto& [id, l] : labels) {
    out += textio::csv_escape(id);
    out += ',';
    out += std::to_string(l);
    out += '\n';
  }
  textio::write_text_file(path, out);
}

std::vector<std::pair<std::string, int>> read_labels_csv(const std::string& path) {
  const textio::CsvFile csv = textio::read_csv(path);
  if (csv.header != std::vector<std::string>{"patient_id", "cluster"})
    throw std::invalid_argument(path + ": expected header patient_id,cluster");
  std::vector<std::pair<std::string, int>> labels;
  for (const auto& row : csv.rows) {
    if (row.fields.size() != 2)
      throw std::invalid_argument(path + ":" + std::to_string(row.line) +
                                  ": expected 2 fields");
    const auto value = textio::parse_int(row.fields[1]);
    if (!value)
      throw std::invalid_argument(path + ":" + std::to_string(row.line) +
                                  ": bad cluster value");
    labels.emplace_back(row.fields[0], static_cast<int>(*value));
  }
  return labels;
}

}  // namespace vitalclust::cluster
