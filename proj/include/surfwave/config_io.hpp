#pragma once

#include <string>
#include <utility>
#include <vector>

#include "surfwave/core.hpp"

namespace surfwave {

// JSON text for a config; doubles are emitted with round-trip precision.
std::string config_to_json(const MediumConfig& cfg, int indent = 2);

// Parses JSON text. Missing keys keep their defaults; unknown keys are rejected
// except those starting with '_' (used for notes in recipe files).
// Throws ConfigError on malformed input, and on violated invariants when check is set.
MediumConfig config_from_json(const std::string& text, bool check = true);

std::string read_text_file(const std::string& path);
MediumConfig load_config(const std::string& path);

// Applies dotted-path overrides such as {"lorentz.plasma_ratio", "5"} to JSON text
// and returns the modified text.
std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::pair<std::string, std::string>>& overrides);

// Splits "key=value"; throws ConfigError when '=' is missing.
std::pair<std::string, std::string> parse_override(const std::string& kv);

}  // namespace surfwave
