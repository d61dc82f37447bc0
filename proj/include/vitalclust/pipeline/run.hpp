#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "vitalclust/cluster/params.hpp"
#include "vitalclust/pipeline/config.hpp"
#include "vitalclust/prognosis/report.hpp"
#include "vitalclust/validity/sweep.hpp"

namespace vitalclust::pipeline {

// Thrown by the cmd_* orchestrators so the CLI can name the failing stage
// on stderr and exit nonzero.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RunArtifacts {
  validity::ValidityReport validity;
  cluster::ClusterModel model;
  std::vector<std::pair<std::string, int>> dev_labels;
  std::vector<std::pair<std::string, int>> val_labels;
  prognosis::PrognosisReport prognosis;
  // Relative output path -> 64-bit FNV-1a content hash (hex), as written
  // to the manifest. The manifest itself is not listed.
  std::map<std::string, std::string> output_hashes;
};

// ingest -> features -> sweep -> final fit -> validation labels (frozen
// assignment or refit + Hungarian alignment) -> prognosis -> trajectories
// -> manifest.json. config_text is the raw config document; its hash goes
// in the manifest. Every numeric output is a pure function of (config,
// input files); the worker count never changes a byte.
RunArtifacts cmd_run(const PipelineConfig& config, const std::string& config_text,
                     int workers = 1);

// Prognosis + trajectory outputs recomputed from a stored model, no
// refitting: both cohorts are labeled through the frozen model.
void cmd_report(const PipelineConfig& config,
                const std::filesystem::path& model_path, int workers = 1);

// Ingest + features + the validity sweep only; writes validity.csv/json.
validity::ValidityReport cmd_sweep(const PipelineConfig& config, int workers = 1);

}  // namespace vitalclust::pipeline
