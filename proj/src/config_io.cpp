#include "surfwave/config_io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace surfwave {

using nlohmann::json;

namespace {

json layer_json(const LayerParams& l) { return {{"eps_rel", l.eps_rel}, {"mu_rel", l.mu_rel}}; }

double number_at(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + key + " must be a number");
  return v.get<double>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& k = it.key();
    if (!k.empty() && k[0] == '_') continue;
    bool ok = false;
    for (const char* q : known) ok = ok || k == q;
    if (!ok) throw ConfigError("unknown config key: " + where + k);
  }
}

LayerParams layer_from(const json& j, const LayerParams& def, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  reject_unknown(j, {"eps_rel", "mu_rel"}, where + ".");
  return {number_at(j, "eps_rel", def.eps_rel, where + "."), number_at(j, "mu_rel", def.mu_rel, where + ".")};
}

}  // namespace

std::string config_to_json(const MediumConfig& cfg, int indent) {
  json j;
  j["layer_a"] = layer_json(cfg.layer_a);
  j["layer_b"] = layer_json(cfg.layer_b);
  j["h"] = cfg.fill;
  j["rho"] = cfg.rho;
  j["lorentz"] = {{"plasma_ratio", cfg.lorentz.plasma_ratio},
                  {"loss_ratio", cfg.lorentz.loss_ratio},
                  {"mu_rel", cfg.lorentz.mu_rel}};
  j["polarization"] = to_string(cfg.polarization);
  return j.dump(indent);
}

MediumConfig config_from_json(const std::string& text, bool check) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, {"layer_a", "layer_b", "h", "rho", "lorentz", "polarization"}, "");

  MediumConfig cfg;
  if (j.contains("layer_a")) cfg.layer_a = layer_from(j["layer_a"], cfg.layer_a, "layer_a");
  if (j.contains("layer_b")) cfg.layer_b = layer_from(j["layer_b"], cfg.layer_b, "layer_b");
  cfg.fill = number_at(j, "h", cfg.fill, "");
  cfg.rho = number_at(j, "rho", cfg.rho, "");
  if (j.contains("lorentz")) {
    const auto& l = j["lorentz"];
    if (!l.is_object()) throw ConfigError("lorentz must be an object");
    reject_unknown(l, {"plasma_ratio", "loss_ratio", "mu_rel"}, "lorentz.");
    cfg.lorentz.plasma_ratio = number_at(l, "plasma_ratio", cfg.lorentz.plasma_ratio, "lorentz.");
    cfg.lorentz.loss_ratio = number_at(l, "loss_ratio", cfg.lorentz.loss_ratio, "lorentz.");
    cfg.lorentz.mu_rel = number_at(l, "mu_rel", cfg.lorentz.mu_rel, "lorentz.");
  }
  if (j.contains("polarization")) {
    if (!j["polarization"].is_string()) throw ConfigError("polarization must be a string");
    cfg.polarization = polarization_from_string(j["polarization"].get<std::string>());
  }
  if (check) validate_config(cfg);
  return cfg;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MediumConfig load_config(const std::string& path) { return config_from_json(read_text_file(path)); }

std::pair<std::string, std::string> parse_override(const std::string& kv) {
  auto pos = kv.find('=');
  if (pos == std::string::npos || pos == 0) throw ConfigError("override must look like key=value: " + kv);
  return {kv.substr(0, pos), kv.substr(pos + 1)};
}

std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  for (const auto& [key, value] : overrides) {
    json* node = &j;
    std::stringstream path(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(path, part, '.')) parts.push_back(part);
    if (parts.empty()) throw ConfigError("empty override key");
    for (size_t i = 0; i + 1 < parts.size(); ++i) {
      if (!node->is_object()) throw ConfigError("override path is not an object: " + key);
      node = &(*node)[parts[i]];
      if (node->is_null()) *node = json::object();
    }
    char* end = nullptr;
    const double num = std::strtod(value.c_str(), &end);
    if (!value.empty() && end && *end == '\0')
      (*node)[parts.back()] = num;
    else
      (*node)[parts.back()] = value;
  }
  return j.dump(2);
}

}  // namespace surfwave
