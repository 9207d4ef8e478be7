#include "circlaw/ensemble_json.hpp"

#include "circlaw/error.hpp"

namespace circlaw {

namespace {

[[noreturn]] void spec_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::invalid_spec, (path.empty() ? std::string("/") : path) + ": " + what);
}

EntryDistribution simple_kind(const std::string& kind, const std::string& path) {
  if (kind == "complex-gaussian") return EntryDistribution::complex_gaussian();
  if (kind == "real-gaussian") return EntryDistribution::real_gaussian();
  if (kind == "rademacher") return EntryDistribution::rademacher();
  if (kind == "uniform-centered") return EntryDistribution::uniform_centered();
  if (kind == "two-point-sparse" || kind == "mixture")
    spec_error(path, "'" + kind + "' needs parameters; use the object form");
  spec_error(path, "unknown distribution kind '" + kind + "'");
}

}  // namespace

EntryDistribution parse_distribution(const nlohmann::json& node, const std::string& path) {
  if (node.is_string()) return simple_kind(node.get<std::string>(), path);
  if (!node.is_object()) spec_error(path, "expected a kind name or an object");
  if (!node.contains("kind") || !node["kind"].is_string())
    spec_error(path + "/kind", "missing or not a string");
  const auto kind = node["kind"].get<std::string>();

  try {
    if (kind == "two-point-sparse") {
      if (!node.contains("c") || !node["c"].is_number()) spec_error(path + "/c", "missing or not a number");
      return EntryDistribution::two_point_sparse(node["c"].get<double>());
    }
    if (kind == "mixture") {
      const auto& comps = node.value("components", nlohmann::json());
      if (!comps.is_array() || comps.empty())
        spec_error(path + "/components", "expected a non-empty array");
      std::vector<EntryDistribution::Component> parts;
      for (std::size_t k = 0; k < comps.size(); ++k) {
        const std::string item = path + "/components/" + std::to_string(k);
        const auto& c = comps[k];
        if (!c.is_object()) spec_error(item, "expected {\"weight\": w, \"dist\": ...}");
        if (!c.contains("weight") || !c["weight"].is_number())
          spec_error(item + "/weight", "missing or not a number");
        if (!c.contains("dist")) spec_error(item + "/dist", "missing");
        parts.push_back({parse_distribution(c["dist"], item + "/dist"), c["weight"].get<double>()});
      }
      return EntryDistribution::mixture(std::move(parts));
    }
  } catch (const Error& e) {
    // Constructor validation messages lack the location; attach it once.
    const std::string msg = e.what();
    if (msg.rfind(path.empty() ? "/" : path, 0) == 0) throw;
    spec_error(path, msg);
  }
  return simple_kind(kind, path + "/kind");
}

nlohmann::json to_json(const EntryDistribution& dist) {
  using Kind = EntryDistribution::Kind;
  switch (dist.kind()) {
    case Kind::two_point_sparse: return {{"kind", "two-point-sparse"}, {"c", dist.sparsity()}};
    case Kind::mixture: {
      auto comps = nlohmann::json::array();
      for (const auto& c : dist.components())
        comps.push_back({{"weight", c.weight}, {"dist", to_json(c.dist)}});
      return {{"kind", "mixture"}, {"components", comps}};
    }
    default: return dist.label();
  }
}

}  // namespace circlaw
