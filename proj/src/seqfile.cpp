#include "tracelab/seqfile.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "tracelab/geomspec.hpp"

namespace tracelab {

namespace {

std::vector<double> read_floats(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("sequence file: cannot open value file " + path);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

}  // namespace

std::vector<NamedSequence> load_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("sequence file: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sequence file: parse error: ") + e.what());
  }
  if (!doc.is_array()) throw ConfigError("sequence file: top level must be an array");

  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::vector<NamedSequence> out;
  for (const auto& rec : doc) {
    if (!rec.is_object() || !rec.contains("name") || !rec.contains("kind"))
      throw ConfigError("sequence file: each record needs name and kind");
    const std::string name = rec.at("name").get<std::string>();
    const std::string kind = rec.at("kind").get<std::string>();

    SyntheticParams params;
    if (rec.contains("L")) params.L = rec.at("L").get<double>();
    if (rec.contains("delta")) params.delta = rec.at("delta").get<double>();
    if (rec.contains("ratio")) params.ratio = rec.at("ratio").get<double>();

    auto push = [&](CharacteristicSequence seq) {
      out.push_back(NamedSequence{name, std::move(seq)});
    };

    if (kind == "explicit") {
      std::vector<double> values;
      if (rec.contains("values")) {
        values = rec.at("values").get<std::vector<double>>();
      } else if (rec.contains("path")) {
        std::filesystem::path p = rec.at("path").get<std::string>();
        if (p.is_relative()) p = base / p;
        values = read_floats(p.string());
      } else {
        throw ConfigError("sequence file: explicit record needs values or path");
      }
      push(CharacteristicSequence::from_values(name, std::move(values)));
    } else if (kind == "harmonic") {
      push(synthetic_model(SyntheticKind::harmonic));
    } else if (kind == "scaled_harmonic") {
      push(synthetic_model(SyntheticKind::scaled_harmonic, params));
    } else if (kind == "geometric") {
      push(synthetic_model(SyntheticKind::geometric, params));
    } else if (kind == "perturbed") {
      push(synthetic_model(SyntheticKind::perturbed, params));
    } else if (kind == "oscillating") {
      push(synthetic_model(SyntheticKind::oscillating));
    } else if (kind == "varilly") {
      push(varilly_model());
    } else if (kind == "zero") {
      push(CharacteristicSequence::zero());
    } else {
      throw ConfigError("sequence file: unknown kind '" + kind + "'");
    }
  }
  return out;
}

}  // namespace tracelab
