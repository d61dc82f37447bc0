#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <string>

#include "vitalclust/cluster/model_io.hpp"
#include "vitalclust/core/log.hpp"
#include "vitalclust/core/textio.hpp"
#include "vitalclust/core/types.hpp"
#include "vitalclust/ingest/csv.hpp"
#include "vitalclust/ingest/filters.hpp"
#include "vitalclust/ingest/synthetic.hpp"
#include "vitalclust/pipeline/config.hpp"
#include "vitalclust/pipeline/run.hpp"

namespace fs = std::filesystem;
using namespace vitalclust;

namespace {

constexpr int kExitStage = 1;
constexpr int kExitUsage = 2;

pipeline::PipelineConfig load_config_or_exit(const std::string& path,
                                             const std::string& out_override,
                                             std::string* config_text) {
  try {
    const std::string text = textio::read_text_file(path);
    auto cfg = pipeline::parse_config(text, path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (config_text) *config_text = text;
    return cfg;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    std::exit(kExitUsage);
  }
}

int run_synth(const std::string& spec_path, const std::string& out_dir) {
  try {
    const auto spec = ingest::SyntheticSpec::load_json(spec_path);
    const auto synth = ingest::generate_synthetic_cohort(spec);
    fs::create_directories(out_dir);

    ingest::write_timeseries_csv(synth.cohort.series,
                                 fs::path(out_dir) / "timeseries.csv");
    std::vector<StaticRecord> statics;
    statics.reserve(synth.cohort.series.size());
    for (const auto& s : synth.cohort.series)
      statics.push_back(synth.cohort.statics.at(s.patient_id));
    ingest::write_static_csv(statics, fs::path(out_dir) / "static.csv");
    ingest::write_truth_csv(synth, fs::path(out_dir) / "truth.csv");

    log::info("synth: wrote " + std::to_string(synth.cohort.size()) +
              " patients to " + out_dir);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "synth: " << e.what() << "\n";
    return kExitStage;
  }
}

int run_validate(const pipeline::PipelineConfig& cfg, int workers) {
  try {
    const auto ts = ingest::parse_timeseries_csv(cfg.timeseries_csv);
    const auto st = ingest::parse_static_csv(cfg.static_csv);
    ingest::ExclusionLog exclusions;
    const Cohort cohort = ingest::apply_cohort_filters(
        ts.observations, st.records, cfg.timesteps, &exclusions, workers);
    const auto violations = validate_cohort(cohort);

    for (const auto& e : ts.errors)
      std::cout << "timeseries line " << e.line << ": " << e.message << "\n";
    for (const auto& e : st.errors)
      std::cout << "static line " << e.line << ": " << e.message << "\n";
    for (const auto& [reason, count] : exclusions.counts)
      std::cout << "excluded " << count << " patient(s): " << reason << "\n";
    for (const auto& v : violations)
      std::cout << "violation " << v.patient_id << ": " << v.rule << "\n";
    std::cout << "cohort: " << cohort.size() << " patient(s) pass\n";

    const bool clean = ts.errors.empty() && st.errors.empty() && violations.empty();
    return clean ? 0 : kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "validate: " << e.what() << "\n";
    return kExitStage;
  }
}

int run_run(const pipeline::PipelineConfig& cfg, const std::string& config_text,
            int workers) {
  try {
    const auto art = pipeline::cmd_run(cfg, config_text, workers);
    std::cout << "chosen: "
              << cluster::algorithm_name(art.validity.chosen_algorithm)
              << " k=" << art.validity.chosen_k << "\n";
    std::cout << "outputs: " << art.output_hashes.size() << " file(s) in "
              << cfg.out_dir.string() << "\n";
    return 0;
  } catch (const pipeline::StageError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
}

int run_report(const pipeline::PipelineConfig& cfg, const std::string& model_path,
               int workers) {
  if (!fs::exists(model_path)) {
    std::cerr << "report: model file not found: " << model_path << "\n";
    return kExitUsage;
  }
  try {
    pipeline::cmd_report(cfg, model_path, workers);
    std::cout << "reports written to " << cfg.out_dir.string() << "\n";
    return 0;
  } catch (const pipeline::StageError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
}

int run_sweep(const pipeline::PipelineConfig& cfg, int workers) {
  try {
    const auto report = pipeline::cmd_sweep(cfg, workers);
    std::cout << "chosen: " << cluster::algorithm_name(report.chosen_algorithm)
              << " k=" << report.chosen_k << "\n";
    return 0;
  } catch (const pipeline::StageError& e) {
    std::cerr << "error in stage " << e.stage() << ": " << e.what() << "\n";
    return kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ICU vital-sign cohort clustering pipeline"};
  app.require_subcommand(1);

  std::string config_path, out_dir, spec_path, model_path;
  int workers = 1;

  auto* synth = app.add_subcommand("synth", "generate a synthetic cohort");
  synth->add_option("--spec", spec_path, "synthetic cohort spec (JSON)")
      ->required();
  synth->add_option("--out", out_dir, "output directory")->required();

  auto* validate =
      app.add_subcommand("validate", "check inputs and cohort invariants");
  validate->add_option("--config", config_path, "pipeline config (JSON)")
      ->required();
  validate->add_option("--workers", workers, "worker threads");
  validate->add_option("--out", out_dir, "output directory override");

  auto* run = app.add_subcommand("run", "full pipeline");
  run->add_option("--config", config_path, "pipeline config (JSON)")->required();
  run->add_option("--workers", workers, "worker threads");
  run->add_option("--out", out_dir, "output directory override");

  auto* report =
      app.add_subcommand("report", "prognosis/trajectories from a stored model");
  report->add_option("--config", config_path, "pipeline config (JSON)")
      ->required();
  report->add_option("--model", model_path, "fitted model JSON")->required();
  report->add_option("--workers", workers, "worker threads");
  report->add_option("--out", out_dir, "output directory override");

  auto* sweep = app.add_subcommand("sweep", "fit/score the (algorithm, k) grid");
  sweep->add_option("--config", config_path, "pipeline config (JSON)")->required();
  sweep->add_option("--workers", workers, "worker threads");
  sweep->add_option("--out", out_dir, "output directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (workers < 1) {
    std::cerr << "--workers must be >= 1\n";
    return kExitUsage;
  }

  if (synth->parsed()) return run_synth(spec_path, out_dir);

  std::string config_text;
  const auto cfg = load_config_or_exit(config_path, out_dir, &config_text);
  if (validate->parsed()) return run_validate(cfg, workers);
  if (run->parsed()) return run_run(cfg, config_text, workers);
  if (report->parsed()) return run_report(cfg, model_path, workers);
  if (sweep->parsed()) return run_sweep(cfg, workers);
  return kExitUsage;
}
