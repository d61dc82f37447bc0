#include "vitalclust/pipeline/run.hpp"

#include <json.hpp>
#include <optional>
#include <tuple>

#include "vitalclust/cluster/assign.hpp"
#include "vitalclust/cluster/dbscan.hpp"
#include "vitalclust/cluster/kmeans.hpp"
#include "vitalclust/cluster/kmedoids.hpp"
#include "vitalclust/cluster/kshape.hpp"
#include "vitalclust/cluster/model_io.hpp"
#include "vitalclust/core/hash.hpp"
#include "vitalclust/core/log.hpp"
#include "vitalclust/core/textio.hpp"
#include "vitalclust/features/catalog.hpp"
#include "vitalclust/ingest/csv.hpp"
#include "vitalclust/ingest/filters.hpp"
#include "vitalclust/prognosis/align.hpp"
#include "vitalclust/trajectories/summary.hpp"
#include "vitalclust/validity/indices.hpp"

namespace vitalclust::pipeline {

namespace fs = std::filesystem;

namespace {

struct Inputs {
  Cohort dev;
  Cohort val;
  Cohort full;  // statics of both eras for prognosis
  ingest::ExclusionLog exclusions;
  std::vector<std::pair<std::string, ingest::RowError>> row_errors;  // file tag, error
};

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

Inputs load_inputs(const PipelineConfig& cfg, int workers) {
  return stage("ingest", [&] {
    if (cfg.timeseries_csv.empty() || cfg.static_csv.empty())
      throw std::invalid_argument("config needs timeseries_csv and static_csv");
    const auto ts = ingest::parse_timeseries_csv(cfg.timeseries_csv);
    const auto st = ingest::parse_static_csv(cfg.static_csv);

    Inputs in;
    for (const auto& e : ts.errors) in.row_errors.emplace_back("timeseries", e);
    for (const auto& e : st.errors) in.row_errors.emplace_back("static", e);
    in.full = ingest::apply_cohort_filters(ts.observations, st.records,
                                           cfg.timesteps, &in.exclusions, workers);
    if (in.full.series.empty())
      throw std::runtime_error("no patients survive the cohort filters");
    std::tie(in.dev, in.val) = ingest::split_by_era(in.full);
    if (in.dev.series.empty())
      throw std::runtime_error("development cohort is empty");
    log::info("cohort: " + std::to_string(in.dev.size()) + " development, " +
              std::to_string(in.val.size()) + " validation patients");
    return in;
  });
}

struct DevFeatures {
  features::FeatureMatrix selected;        // normalized, selected columns
  std::vector<std::string> names;          // selected column names
  std::vector<features::ColumnStat> stats; // frozen per selected column
};

DevFeatures build_dev_features(const PipelineConfig& cfg, const Cohort& dev,
                               int workers) {
  return stage("features", [&] {
    const auto catalog = features::FeatureCatalog::v1();
    const auto raw = features::assemble_matrix(dev, catalog, workers);
    const auto cleaned = features::clean_features(raw);
    const auto normalized = features::normalize_features(cleaned);
    DevFeatures out;
    out.names = features::select_features(normalized, cfg.max_abs_corr, cfg.top_n);
    out.selected = features::subset_columns(normalized, out.names);
    const auto& all_stats = *normalized.column_stats;
    for (const auto& name : out.names) {
      const auto idx = normalized.column_index(name);
      out.stats.push_back(all_stats[static_cast<std::size_t>(*idx)]);
    }
    out.selected.column_stats = out.stats;
    log::info("features: " + std::to_string(out.names.size()) + " of " +
              std::to_string(raw.cols()) + " columns selected");
    return out;
  });
}

features::FeatureMatrix frozen_val_features(const Cohort& val,
                                            const std::vector<std::string>& names,
                                            const std::vector<features::ColumnStat>& stats,
                                            int workers) {
  const auto catalog = features::FeatureCatalog::v1();
  const auto raw = features::assemble_matrix(val, catalog, workers);
  return features::apply_normalization(raw, names, stats);
}

cluster::ClusterModel fit_algorithm(const PipelineConfig& cfg,
                                    cluster::Algorithm algo, int k,
                                    const features::FeatureMatrix& matrix,
                                    const std::vector<PatientSeries>& series,
                                    int workers) {
  cluster::ClusterParams params = cfg.base_params();
  params.algorithm = algo;
  params.k = k;
  switch (algo) {
    case cluster::Algorithm::KMeans:
      return cluster::kmeans_fit(matrix, params, workers);
    case cluster::Algorithm::KMedoids:
      return cluster::kmedoids_fit(matrix, params, workers);
    case cluster::Algorithm::KShape:
      return cluster::kshape_fit(series, params, workers);
    case cluster::Algorithm::DBSCAN:
      return cluster::dbscan_fit(matrix, params, workers);
  }
  throw std::logic_error("unknown algorithm");
}

std::string hash_file(const fs::path& path) {
  return textio::fmt_u64_hex(hash64_str(textio::read_text_file(path)));
}

// Writes through to out_dir and records the relative path + content hash.
class OutputSet {
 public:
  explicit OutputSet(fs::path out_dir) : out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
  }

  fs::path dir() const { return out_dir_; }

  void put(const std::string& rel, std::string_view content) {
    const fs::path p = out_dir_ / rel;
    textio::write_text_file(p, content);
    hashes_[rel] = hash_file(p);
  }

  void note(const fs::path& absolute) {
    hashes_[fs::relative(absolute, out_dir_).generic_string()] = hash_file(absolute);
  }

  const std::map<std::string, std::string>& hashes() const { return hashes_; }

 private:
  fs::path out_dir_;
  std::map<std::string, std::string> hashes_;
};

void write_ingest_outputs(OutputSet& out, const Inputs& in) {
  std::string exclusions = "patient_id,reason\n";
  for (const auto& [id, reason] : in.exclusions.entries)
    exclusions += textio::csv_escape(id) + "," + reason + "\n";
  out.put("exclusions.csv", exclusions);
  if (!in.row_errors.empty()) {
    std::string errors = "file,line,message\n";
    for (const auto& [tag, e] : in.row_errors)
      errors += tag + "," + std::to_string(e.line) + "," +
                textio::csv_escape(e.message) + "\n";
    out.put("parse_errors.csv", errors);
  }
}

void write_feature_outputs(OutputSet& out, const features::FeatureMatrix& dev,
                           const features::FeatureMatrix* val) {
  const fs::path dev_path = out.dir() / "features_dev.csv";
  features::write_feature_csv(dev, dev_path);
  out.note(dev_path);
  const fs::path stats_path = out.dir() / "feature_stats.csv";
  features::write_stats_csv(dev, stats_path);
  out.note(stats_path);
  if (val) {
    const fs::path val_path = out.dir() / "features_val.csv";
    features::write_feature_csv(*val, val_path);
    out.note(val_path);
  }
}

std::vector<std::pair<std::string, int>> validation_labels(
    const PipelineConfig& cfg, const cluster::ClusterModel& model,
    const features::FeatureMatrix& dev_matrix,
    const features::FeatureMatrix& val_matrix, const Cohort& val, int workers) {
  if (cfg.validation == ValidationMode::FrozenAssign) {
    if (model.algorithm == cluster::Algorithm::KShape)
      return cluster::assign_frozen_grids(model, val.series, workers);
    return cluster::assign_frozen(model, val_matrix, workers);
  }

  // Refit in the frozen feature space, then rename the fresh clusters to
  // the development ones through the Hungarian match of the feature-space
  // cluster means (no shared patients across eras).
  auto refit = fit_algorithm(cfg, model.algorithm, model.k, val_matrix,
                             val.series, workers);
  if (refit.k != model.k)
    throw std::runtime_error(
        "refit produced " + std::to_string(refit.k) + " clusters, model has " +
        std::to_string(model.k) + "; labels cannot be aligned");

  const auto dev_means =
      validity::cluster_means(dev_matrix.values, model.label_values());
  const auto val_means =
      validity::cluster_means(val_matrix.values, refit.label_values());
  const auto perm = prognosis::align_labels_centroids(dev_means, val_means);

  std::vector<std::pair<std::string, int>> labels = refit.labels;
  for (auto& [id, l] : labels)
    if (l >= 0) l = perm[static_cast<std::size_t>(l)];
  return labels;
}

}  // namespace

RunArtifacts cmd_run(const PipelineConfig& cfg, const std::string& config_text,
                     int workers) {
  RunArtifacts art;
  OutputSet out(cfg.out_dir);

  const Inputs in = load_inputs(cfg, workers);
  write_ingest_outputs(out, in);

  const DevFeatures dev_features = build_dev_features(cfg, in.dev, workers);

  std::optional<features::FeatureMatrix> val_matrix;
  if (!in.val.series.empty())
    val_matrix = stage("features", [&] {
      return frozen_val_features(in.val, dev_features.names, dev_features.stats,
                                 workers);
    });
  write_feature_outputs(out, dev_features.selected,
                        val_matrix ? &*val_matrix : nullptr);

  art.validity = stage("sweep", [&] {
    validity::SweepOptions options;
    options.algorithms = cfg.algorithms;
    options.k_min = cfg.k_min;
    options.k_max = cfg.k_max;
    options.base = cfg.base_params();
    auto report = validity::sweep(dev_features.selected, in.dev.series, options,
                                  workers);
    out.put("validity.csv", validity::report_to_csv(report));
    out.put("validity.json", validity::report_to_json(report));
    log::info("sweep: chose " +
              std::string(cluster::algorithm_name(report.chosen_algorithm)) +
              " at k=" + std::to_string(report.chosen_k));
    return report;
  });

  art.model = stage("fit", [&] {
    auto model = fit_algorithm(cfg, art.validity.chosen_algorithm,
                               art.validity.chosen_k, dev_features.selected,
                               in.dev.series, workers);
    model.selected_features = dev_features.names;
    model.normalization = dev_features.stats;
    out.put("model.json", cluster::model_to_json(model));
    out.put("labels_dev.csv", [&] {
      std::string csv = "patient_id,cluster\n";
      for (const auto& [id, l] : model.labels)
        csv += textio::csv_escape(id) + "," + std::to_string(l) + "\n";
      return csv;
    }());
    return model;
  });
  art.dev_labels = art.model.labels;

  if (val_matrix) {
    art.val_labels = stage("validation", [&] {
      auto labels = validation_labels(cfg, art.model, dev_features.selected,
                                      *val_matrix, in.val, workers);
      std::string csv = "patient_id,cluster\n";
      for (const auto& [id, l] : labels)
        csv += textio::csv_escape(id) + "," + std::to_string(l) + "\n";
      out.put("labels_val.csv", csv);
      return labels;
    });
  }

  art.prognosis = stage("prognosis", [&] {
    auto report = prognosis::subgroup_report(art.dev_labels, art.val_labels,
                                             in.full.statics, cfg.bootstrap_b,
                                             cfg.seed, workers);
    out.put("prognosis.csv", prognosis::prognosis_to_csv(report));
    out.put("prognosis.json", prognosis::prognosis_to_json(report));
    return report;
  });

  stage("trajectories", [&] {
    const auto dev_summary =
        trajectories::aggregate(in.dev.series, art.dev_labels, Era::Development);
    for (const auto& p : trajectories::emit_plot_data(
             dev_summary, out.dir().string(), cfg.band_multiplier))
      out.note(p);
    if (!art.val_labels.empty()) {
      const auto val_summary =
          trajectories::aggregate(in.val.series, art.val_labels, Era::Validation);
      for (const auto& p : trajectories::emit_plot_data(
               val_summary, out.dir().string(), cfg.band_multiplier))
        out.note(p);
    }
    return 0;
  });

  stage("manifest", [&] {
    nlohmann::json doc;
    doc["format"] = "vitalclust-manifest";
    doc["config_hash"] = textio::fmt_u64_hex(hash64_str(config_text));
    doc["seed"] = cfg.seed;
    doc["chosen_algorithm"] =
        std::string(cluster::algorithm_name(art.validity.chosen_algorithm));
    doc["chosen_k"] = art.validity.chosen_k;
    doc["outputs"] = out.hashes();
    textio::write_text_file(out.dir() / "manifest.json", doc.dump(2) + "\n");
    return 0;
  });

  art.output_hashes = out.hashes();
  return art;
}

void cmd_report(const PipelineConfig& cfg, const fs::path& model_path,
                int workers) {
  const auto model = stage("model", [&] { return cluster::read_model_json(model_path); });
  OutputSet out(cfg.out_dir);
  const Inputs in = load_inputs(cfg, workers);

  const auto label_cohort = [&](const Cohort& cohort) {
    if (model.algorithm == cluster::Algorithm::KShape)
      return cluster::assign_frozen_grids(model, cohort.series, workers);
    const auto catalog = features::FeatureCatalog::v1();
    const auto raw = features::assemble_matrix(cohort, catalog, workers);
    const auto frozen = features::apply_normalization(raw, model.selected_features,
                                                      model.normalization);
    return cluster::assign_frozen(model, frozen, workers);
  };

  const auto dev_labels = stage("validation", [&] { return label_cohort(in.dev); });
  const auto val_labels = stage("validation", [&] {
    return in.val.series.empty() ? std::vector<std::pair<std::string, int>>{}
                                 : label_cohort(in.val);
  });

  stage("prognosis", [&] {
    const auto report = prognosis::subgroup_report(
        dev_labels, val_labels, in.full.statics, cfg.bootstrap_b, cfg.seed, workers);
    out.put("prognosis.csv", prognosis::prognosis_to_csv(report));
    out.put("prognosis.json", prognosis::prognosis_to_json(report));
    return 0;
  });

  stage("trajectories", [&] {
    const auto dev_summary =
        trajectories::aggregate(in.dev.series, dev_labels, Era::Development);
    trajectories::emit_plot_data(dev_summary, out.dir().string(), cfg.band_multiplier);
    if (!val_labels.empty()) {
      const auto val_summary =
          trajectories::aggregate(in.val.series, val_labels, Era::Validation);
      trajectories::emit_plot_data(val_summary, out.dir().string(),
                                   cfg.band_multiplier);
    }
    return 0;
  });
}

validity::ValidityReport cmd_sweep(const PipelineConfig& cfg, int workers) {
  OutputSet out(cfg.out_dir);
  const Inputs in = load_inputs(cfg, workers);
  const DevFeatures dev_features = build_dev_features(cfg, in.dev, workers);
  return stage("sweep", [&] {
    validity::SweepOptions options;
    options.algorithms = cfg.algorithms;
    options.k_min = cfg.k_min;
    options.k_max = cfg.k_max;
    options.base = cfg.base_params();
    auto report =
        validity::sweep(dev_features.selected, in.dev.series, options, workers);
    out.put("validity.csv", validity::report_to_csv(report));
    out.put("validity.json", validity::report_to_json(report));
    return report;
  });
}

}  // namespace vitalclust::pipeline
