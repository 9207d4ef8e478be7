#pragma once

#include <string>

#include <json.hpp>

#include "circlaw/ensemble.hpp"

namespace circlaw {

/// Parses the config form of a distribution: either a bare kind name
/// ("rademacher") or an object {"kind": ..., "c": ..., "components": [...]}
/// where each component is {"weight": w, "dist": <distribution>}.
/// Errors are invalid_spec and carry the JSON path, prefixed with `path`.
EntryDistribution parse_distribution(const nlohmann::json& node, const std::string& path = "");

nlohmann::json to_json(const EntryDistribution& dist);

}  // namespace circlaw
