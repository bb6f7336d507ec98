#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/network.hpp"

namespace hetnet::cli {

struct CommonOptions {
    std::string config_path;
    std::optional<AccessMode> mode;  // overrides the config's access_mode
    std::vector<std::string> metrics;
    std::uint64_t seed = 1;
    long drops = 100000;
    std::string out_path;  // CSV file (eval/sweep/validate) or directory (reproduce)
    bool bits = false;     // report bit-units instead of natural-log units
    int threads = 0;
    std::optional<int> tier;
    bool one_per_bs = false;       // validate: append realism-probe rows
    bool ee_include_static = false;  // fold the static UE power into EE
};

struct SweepOptions {
    std::string param;            // e.g. tier[0].fpc_factor, tier[*].epsilon
    std::vector<double> values;
    std::vector<AccessMode> modes;
};

int cmd_eval(const CommonOptions& opt);
int cmd_sweep(const CommonOptions& opt, const SweepOptions& sweep);
int cmd_reproduce(const std::string& target, const CommonOptions& opt);
int cmd_validate(const CommonOptions& opt);

}  // namespace hetnet::cli
