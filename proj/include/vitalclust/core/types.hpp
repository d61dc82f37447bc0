#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vitalclust {

inline constexpr int kNumChannels = 5;

// Canonical channel order; every grid and feature layout follows it.
enum class VitalChannel : int {
  Temperature = 0,  // degrees C
  HeartRate = 1,    // beats/min
  MeanBP = 2,       // mmHg
  RespRate = 3,     // breaths/min
  SpO2 = 4,         // percent
};

/// Short code used in CSV files and feature names: temp, hr, mbp, rr, spo2.
std::string_view channel_code(VitalChannel c);
std::optional<VitalChannel> channel_from_code(std::string_view code);

/// 5 x T grid, one row per channel in canonical order.
using VitalGrid = Eigen::Matrix<double, kNumChannels, Eigen::Dynamic>;

struct PatientSeries {
  std::string patient_id;
  VitalGrid grid;

  int timesteps() const { return static_cast<int>(grid.cols()); }
};

enum class Era { Development, Validation };

std::string_view era_name(Era e);  // "development" / "validation"

struct StaticRecord {
  std::string patient_id;
  int age = 0;
  std::string gender;
  std::optional<std::string> race;
  std::optional<double> height_cm;
  std::optional<double> weight_kg;
  bool icu_death = false;
  bool hospital_death = false;
  Era era = Era::Development;
  std::optional<std::string> dod;  // passthrough text, never parsed
};

struct Cohort {
  std::vector<PatientSeries> series;
  std::unordered_map<std::string, StaticRecord> statics;

  std::size_t size() const { return series.size(); }
};

struct Violation {
  std::string patient_id;
  std::string rule;
};

/// Pure invariant check; violations are data, not failures. Sorted by
/// (patient_id, rule) so the result is independent of map iteration order.
std::vector<Violation> validate_cohort(const Cohort& cohort);

}  // namespace vitalclust
