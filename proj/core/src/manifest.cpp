#include "tadpole/manifest.hpp"

#include <string>

#include "internal/json_writer.hpp"
#include "tadpole/errors.hpp"

namespace tadpole {

using detail::Json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Profile:
      return "profile";
    case Command::Exists:
      return "exists";
    case Command::Spectrum:
      return "spectrum";
    case Command::Evolve:
      return "evolve";
    case Command::Certify:
      return "certify";
  }
  return "?";
}

Command parse_command(std::string_view s) {
  if (s == "profile") return Command::Profile;
  if (s == "exists") return Command::Exists;
  if (s == "spectrum") return Command::Spectrum;
  if (s == "evolve") return Command::Evolve;
  if (s == "certify") return Command::Certify;
  throw DomainError("unknown command '" + std::string(s) + "'");
}

std::string_view to_string(OperatorKind o) {
  switch (o) {
    case OperatorKind::Linearized:
      return "linearized";
    case OperatorKind::Laplacian:
      return "laplacian";
    case OperatorKind::PositiveTest:
      return "positive-test";
  }
  return "?";
}

OperatorKind parse_operator(std::string_view s) {
  if (s == "linearized") return OperatorKind::Linearized;
  if (s == "laplacian") return OperatorKind::Laplacian;
  if (s == "positive-test") return OperatorKind::PositiveTest;
  throw DomainError("unknown operator '" + std::string(s) + "'");
}

std::string RunManifest::to_json() const {
  Json j;
  j["command"] = std::string(to_string(command));
  j["params"] = Json{{"L", params.L}, {"c1", params.c1}, {"c2", params.c2}, {"Z", params.Z}};
  j["branch"] = std::string(to_string(branch));
  if (k) {
    j["k"] = *k;
  } else {
    j["k"] = "auto";
  }
  j["grid"] = Json{{"h", grid.h}, {"R", grid.R}};
  j["output_dir"] = output_dir;
  j["operator"] = std::string(to_string(op));
  j["evolve_check"] = evolve_check;
  j["amplitude"] = amplitude;
  return detail::dump_stable(j);
}

RunManifest RunManifest::from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("manifest must be a JSON object");

  RunManifest m;
  try {
    const Json& p = j.contains("params") ? j.at("params") : j;
    m.params.L = p.at("L").get<double>();
    m.params.c1 = p.at("c1").get<double>();
    m.params.c2 = p.at("c2").get<double>();
    m.params.Z = p.at("Z").get<double>();
    if (j.contains("command")) m.command = parse_command(j.at("command").get<std::string>());
    if (j.contains("branch")) m.branch = parse_branch(j.at("branch").get<std::string>());
    if (j.contains("k")) {
      const Json& k = j.at("k");
      if (k.is_string()) {
        if (k.get<std::string>() != "auto") throw DomainError("k must be a number or \"auto\"");
      } else {
        m.k = k.get<double>();
      }
    }
    if (j.contains("grid")) {
      const Json& g = j.at("grid");
      if (g.contains("h")) m.grid.h = g.at("h").get<double>();
      if (g.contains("R")) m.grid.R = g.at("R").get<double>();
    }
    if (j.contains("output_dir")) m.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("operator")) m.op = parse_operator(j.at("operator").get<std::string>());
    if (j.contains("evolve_check")) m.evolve_check = j.at("evolve_check").get<bool>();
    if (j.contains("amplitude")) m.amplitude = j.at("amplitude").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed manifest: ") + e.what());
  }
  m.params.validate();
  return m;
}

}  // namespace tadpole
