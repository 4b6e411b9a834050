#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "decstab/pipeline.hpp"

namespace decstab {

/// Plant document: {"name", "n", "m", "A", "B", "C"} with row-major nested
/// arrays. Parsing reports the offending field; the result always passes
/// validate_plant.
Plant parse_plant(const std::string& text, const std::string& origin);
Plant load_plant(const std::filesystem::path& path);
std::string plant_to_text(const Plant& p);
void save_plant(const Plant& p, const std::filesystem::path& path);

/// Schedule document written by synthesis and reloaded by simulation. Carries
/// the floors and certificate numbers so a simulation can re-validate without
/// re-deriving them.
struct ScheduleFile {
  GainSchedule schedule;
  Vector k_tilde;
  double gamma = 0.0;
  ExpBound bound;
};

ScheduleFile load_schedule(const std::filesystem::path& path);
void save_schedule(const GainSynthesis& gs, const std::filesystem::path& path);

/// Delimiter-separated trajectory export: header row, then per sample
/// time, state components, 1-norm, 2-norm at 17 significant digits.
void write_trajectory_csv(const Trajectory& traj,
                          const std::filesystem::path& path);

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& field);

nlohmann::json to_json(const SpectralReport& rep);
nlohmann::json to_json(const AnalysisReport& rep);
nlohmann::json to_json(const SynthesisReport& rep);
nlohmann::json to_json(const SimulationReport& rep);
nlohmann::json schedule_to_json(const GainSchedule& s);
GainSchedule schedule_from_json(const nlohmann::json& j);

}  // namespace decstab
