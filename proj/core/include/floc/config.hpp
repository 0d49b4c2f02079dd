#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "floc/equilibrium.hpp"
#include "floc/model.hpp"
#include "floc/multispecies.hpp"

namespace floc {

/// Reads a JSON document; parse failures become ConfigError("config", ...).
nlohmann::json load_json(const std::filesystem::path& path);

/// {"monod": {"mu_max": ..., "K": ...}}
GrowthLaw parse_growth(const nlohmann::json& j, const std::string& field);

/// Single-species model document. D_u and D_v default to D; epsilon is
/// optional. Throws ConfigError naming the offending field.
Model parse_model(const nlohmann::json& j);

/// Multi-species document: the single-species keys (minus the per-compartment
/// laws) plus "species": [{growth_u, growth_v}, ...], "A" and "b".
MultiSpeciesModel parse_multispecies(const nlohmann::json& j);

bool is_multispecies_config(const nlohmann::json& j);

/// Resolved configuration with every default materialized.
nlohmann::json to_json(const Model& model);
nlohmann::json to_json(const MultiSpeciesModel& model);
nlohmann::json to_json(const GrowthLaw& growth);

/// {state, kind, classification, eigenvalues, residual, gamma_prime_sign}
nlohmann::json to_json(const Equilibrium& eq);
nlohmann::json to_json(const std::vector<Equilibrium>& eqs);

/// Serialized with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace floc
