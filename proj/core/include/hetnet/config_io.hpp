#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hetnet/network.hpp"

// Scenario files: flat UTF-8 key = value lines with repeated [tier] blocks.
//
//   ue_intensity = 0.2
//   bandwidth_mhz = 20            # or bandwidth_hz
//   interference_limited = true   # or noise_dbm / noise_w
//   access_mode = duda            # duda | cuda_fading | cuda_mean
//   ue_max_tx_power_dbm = 23      # optional; MC cap, off unless requested
//   ue_static_power_dbm = ...     # optional; carried, unused by the model
//   [tier]
//   bs_intensity = 0.01
//   bs_power_dbm = 43             # or bs_power_w
//   alpha = 4.3
//   epsilon = 0.5
//   baseline_ue_power_dbm = -10   # or baseline_ue_power_w
//   sinr_threshold_db = -10       # or sinr_threshold (linear)
//
// Unknown keys are an error. save_config emits the canonical watt/linear
// keys at full precision so that load(save(c)) reproduces c bit-for-bit.

namespace hetnet {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

NetworkConfig load_config(std::string_view text);
NetworkConfig load_config_file(const std::string& path);

std::string save_config(const NetworkConfig& config);

/// "table2_pico" and "table2_femto": the two-tier measurement scenarios.
NetworkConfig builtin_scenario(std::string_view name);
std::vector<std::string> builtin_scenario_names();

}  // namespace hetnet
