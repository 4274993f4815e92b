#pragma once

#include <string>

#include <json.hpp>

#include "perfsde/domain.hpp"
#include "perfsde/expansion.hpp"
#include "perfsde/noise.hpp"
#include "perfsde/spde.hpp"
#include "perfsde/stability.hpp"

namespace perfsde::io {

/// {"dimension":2,"outer":{"kind":"box","min":[0,0],"max":[1,1]},
///  "holes":[{"center":[0.5,0.5],"eps":0.05,"shape":"ball"}]}
DomainSpec parse_domain(const nlohmann::json& j);
DomainSpec load_domain(const std::string& path);
nlohmann::json domain_to_json(const DomainSpec& spec);

/// {"kind":"linear","alpha":3.0} | {"kind":"rational"} | {"kind":"zero"},
/// or the compact flag forms "linear:alpha=3.0", "rational", "zero".
NoiseModel parse_noise(const nlohmann::json& j);
NoiseModel parse_noise_flag(const std::string& flag);

nlohmann::json expansion_to_json(const ExpansionReport& report);
nlohmann::json stability_to_json(const StabilityReport& report);
nlohmann::json ensemble_to_json(const EnsembleSummary& summary, const SpdeConfig& cfg);

std::string expansion_csv(std::span<const ExpansionReport> reports);
std::string trajectory_csv(const TrajectoryStats& stats);

}  // namespace perfsde::io
