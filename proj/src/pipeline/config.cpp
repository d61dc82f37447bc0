#include "vitalclust/pipeline/config.hpp"

#include <json.hpp>
#include <set>
#include <stdexcept>

#include "vitalclust/core/textio.hpp"

namespace vitalclust::pipeline {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
  throw std::invalid_argument(origin + ": " + message);
}

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& origin, const std::string& prefix) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) fail(origin, "unknown key \"" + prefix + key + "\"");
}

}  // namespace

cluster::ClusterParams PipelineConfig::base_params() const {
  cluster::ClusterParams params;
  params.seed = seed;
  params.n_init = n_init;
  params.max_iter = max_iter;
  params.tol = tol;
  params.eps = dbscan_eps;
  params.min_pts = dbscan_min_pts;
  return params;
}

PipelineConfig parse_config(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(origin, "top level must be an object");

  reject_unknown(doc,
                 {"timeseries_csv", "static_csv", "out_dir", "timesteps", "seed",
                  "bootstrap_b", "feature_selection", "algorithms", "k_min",
                  "k_max", "n_init", "max_iter", "tol", "dbscan", "validation",
                  "band_multiplier"},
                 origin, "");

  PipelineConfig cfg;
  if (!doc.contains("seed") || !doc["seed"].is_number_unsigned())
    fail(origin, "\"seed\" is required and must be a non-negative integer");
  cfg.seed = doc["seed"].get<std::uint64_t>();

  if (doc.contains("timeseries_csv"))
    cfg.timeseries_csv = doc["timeseries_csv"].get<std::string>();
  if (doc.contains("static_csv"))
    cfg.static_csv = doc["static_csv"].get<std::string>();
  if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();
  if (doc.contains("timesteps")) cfg.timesteps = doc["timesteps"].get<int>();
  if (cfg.timesteps < 3) fail(origin, "\"timesteps\" must be >= 3");
  if (doc.contains("bootstrap_b")) cfg.bootstrap_b = doc["bootstrap_b"].get<int>();
  if (cfg.bootstrap_b < 1) fail(origin, "\"bootstrap_b\" must be >= 1");

  if (doc.contains("feature_selection")) {
    const auto& fs = doc["feature_selection"];
    if (!fs.is_object()) fail(origin, "\"feature_selection\" must be an object");
    reject_unknown(fs, {"max_abs_corr", "top_n"}, origin, "feature_selection.");
    if (fs.contains("max_abs_corr"))
      cfg.max_abs_corr = fs["max_abs_corr"].get<double>();
    if (fs.contains("top_n") && !fs["top_n"].is_null())
      cfg.top_n = fs["top_n"].get<int>();
    if (cfg.max_abs_corr <= 0.0 || cfg.max_abs_corr > 1.0)
      fail(origin, "feature_selection.max_abs_corr must be in (0, 1]");
    if (cfg.top_n && *cfg.top_n < 1)
      fail(origin, "feature_selection.top_n must be >= 1");
  }

  if (doc.contains("algorithms")) {
    if (!doc["algorithms"].is_array() || doc["algorithms"].empty())
      fail(origin, "\"algorithms\" must be a non-empty array");
    cfg.algorithms.clear();
    for (const auto& entry : doc["algorithms"]) {
      const auto name = entry.get<std::string>();
      const auto algo = cluster::algorithm_from_name(name);
      if (!algo) fail(origin, "unknown algorithm \"" + name + "\"");
      cfg.algorithms.push_back(*algo);
    }
  }

  if (doc.contains("k_min")) cfg.k_min = doc["k_min"].get<int>();
  if (doc.contains("k_max")) cfg.k_max = doc["k_max"].get<int>();
  if (cfg.k_min < 1 || cfg.k_max < cfg.k_min)
    fail(origin, "k range must satisfy 1 <= k_min <= k_max");
  if (doc.contains("n_init")) cfg.n_init = doc["n_init"].get<int>();
  if (cfg.n_init < 1) fail(origin, "\"n_init\" must be >= 1");
  if (doc.contains("max_iter")) cfg.max_iter = doc["max_iter"].get<int>();
  if (cfg.max_iter < 1) fail(origin, "\"max_iter\" must be >= 1");
  if (doc.contains("tol")) cfg.tol = doc["tol"].get<double>();
  if (!(cfg.tol >= 0.0)) fail(origin, "\"tol\" must be >= 0");

  if (doc.contains("dbscan")) {
    const auto& db = doc["dbscan"];
    if (!db.is_object()) fail(origin, "\"dbscan\" must be an object");
    reject_unknown(db, {"eps", "min_pts"}, origin, "dbscan.");
    if (db.contains("eps") && !db["eps"].is_null())
      cfg.dbscan_eps = db["eps"].get<double>();
    if (db.contains("min_pts")) cfg.dbscan_min_pts = db["min_pts"].get<int>();
    if (cfg.dbscan_eps && !(*cfg.dbscan_eps > 0.0))
      fail(origin, "dbscan.eps must be > 0");
    if (cfg.dbscan_min_pts < 1) fail(origin, "dbscan.min_pts must be >= 1");
  }

  if (doc.contains("validation")) {
    const auto mode = doc["validation"].get<std::string>();
    if (mode == "frozen-assign") {
      cfg.validation = ValidationMode::FrozenAssign;
    } else if (mode == "refit") {
      cfg.validation = ValidationMode::Refit;
    } else {
      fail(origin, "\"validation\" must be \"frozen-assign\" or \"refit\"");
    }
  }

  if (doc.contains("band_multiplier"))
    cfg.band_multiplier = doc["band_multiplier"].get<double>();
  if (!(cfg.band_multiplier >= 0.0))
    fail(origin, "\"band_multiplier\" must be >= 0");

  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return parse_config(textio::read_text_file(path), path.string());
}

}  // namespace vitalclust::pipeline
