#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gfnoma/network.hpp"

namespace gfnoma {

// Flat key=value lines; '#' starts a comment, blank lines are skipped.
std::vector<std::pair<std::string, std::string>> parse_kv_text(
    const std::string& text);
std::vector<std::pair<std::string, std::string>> read_kv_file(
    const std::string& path);

// Applies one config entry. Keys carry their unit (tx_power_dbm, d1_m,
// noise_dbm, p_static_mw); unknown keys are rejected.
void apply_config_entry(NetworkConfig& cfg, const std::string& key,
                        const std::string& value);

NetworkConfig parse_config_text(const std::string& text);
NetworkConfig load_config(const std::string& path);

// Round-trippable serialization in the same key=value format.
std::string config_to_text(const NetworkConfig& cfg);

}  // namespace gfnoma
