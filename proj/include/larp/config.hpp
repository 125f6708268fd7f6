#pragma once

#include <string>

#include "json.hpp"
#include "larp/experiments.hpp"

namespace larp {

/// JSON (de)serialization of the sweep configurations. Serialized configs
/// are fully explicit -- grids as plain arrays, every default filled in --
/// so an emitted echo re-parses to an equal configuration.

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HeteroConfig& config);
HeteroConfig hetero_config_from_json(const nlohmann::json& j);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
bool operator==(const HeteroConfig& a, const HeteroConfig& b);

}  // namespace larp
