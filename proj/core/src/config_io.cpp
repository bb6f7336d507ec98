#include "hetnet/config_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "hetnet/units.hpp"

namespace hetnet {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view value, int line) {
    const std::string v(value);
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a number, got '" + v + "'");
    }
    if (used != v.size())
        throw ConfigError(line, "trailing characters after number: '" + v + "'");
    return out;
}

bool parse_bool(std::string_view value, int line) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(line, "expected true/false, got '" + std::string(value) + "'");
}

struct PendingTier {
    std::optional<double> bs_intensity, bs_power, alpha, epsilon, baseline, threshold;
    int start_line = 0;
};

TierParams finish_tier(const PendingTier& p) {
    auto need = [&](const std::optional<double>& v, const char* key) {
        if (!v)
            throw ConfigError(p.start_line,
                              std::string("tier block missing key '") + key + "'");
        return *v;
    };
    TierParams t;
    t.bs_intensity = need(p.bs_intensity, "bs_intensity");
    t.bs_tx_power = need(p.bs_power, "bs_power_dbm");
    t.path_loss_exp = need(p.alpha, "alpha");
    t.fpc_factor = need(p.epsilon, "epsilon");
    t.baseline_ue_power = need(p.baseline, "baseline_ue_power_dbm");
    t.sinr_threshold = need(p.threshold, "sinr_threshold_db");
    return t;
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

NetworkConfig load_config(std::string_view text) {
    NetworkConfig config;
    bool have_ue_intensity = false, have_bandwidth = false, have_noise = false,
         have_mode = false;
    std::optional<PendingTier> tier;

    std::istringstream stream{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line == "[tier]") {
            if (tier) config.tiers.push_back(finish_tier(*tier));
            tier = PendingTier{};
            tier->start_line = line_no;
            continue;
        }
        if (line.front() == '[')
            throw ConfigError(line_no, "unknown section '" + std::string(line) + "'");

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(line_no, "expected 'key = value'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");

        if (tier) {
            auto& t = *tier;
            if (key == "bs_intensity") t.bs_intensity = parse_number(value, line_no);
            else if (key == "bs_power_dbm") t.bs_power = dbm_to_watt(parse_number(value, line_no));
            else if (key == "bs_power_w") t.bs_power = parse_number(value, line_no);
            else if (key == "alpha") t.alpha = parse_number(value, line_no);
            else if (key == "epsilon") t.epsilon = parse_number(value, line_no);
            else if (key == "baseline_ue_power_dbm") t.baseline = dbm_to_watt(parse_number(value, line_no));
            else if (key == "baseline_ue_power_w") t.baseline = parse_number(value, line_no);
            else if (key == "sinr_threshold_db") t.threshold = db_to_linear(parse_number(value, line_no));
            else if (key == "sinr_threshold") t.threshold = parse_number(value, line_no);
            else throw ConfigError(line_no, "unknown tier key '" + key + "'");
            continue;
        }

        if (key == "ue_intensity") {
            config.ue_intensity = parse_number(value, line_no);
            have_ue_intensity = true;
        } else if (key == "bandwidth_mhz") {
            config.bandwidth = parse_number(value, line_no) * 1e6;
            have_bandwidth = true;
        } else if (key == "bandwidth_hz") {
            config.bandwidth = parse_number(value, line_no);
            have_bandwidth = true;
        } else if (key == "noise_dbm") {
            config.noise_power = dbm_to_watt(parse_number(value, line_no));
            have_noise = true;
        } else if (key == "noise_w") {
            config.noise_power = parse_number(value, line_no);
            have_noise = true;
        } else if (key == "interference_limited") {
            if (!parse_bool(value, line_no))
                throw ConfigError(line_no,
                                  "interference_limited = false: set noise_dbm instead");
            config.noise_power = 0.0;
            have_noise = true;
        } else if (key == "access_mode") {
            const auto mode = access_mode_from_string(std::string(value));
            if (!mode)
                throw ConfigError(line_no, "unknown access_mode '" + std::string(value) +
                                               "' (duda, cuda_fading, cuda_mean)");
            config.access_mode = *mode;
            have_mode = true;
        } else if (key == "ue_static_power_dbm") {
            config.ue_static_power = dbm_to_watt(parse_number(value, line_no));
        } else if (key == "ue_static_power_w") {
            config.ue_static_power = parse_number(value, line_no);
        } else if (key == "ue_max_tx_power_dbm") {
            config.ue_max_tx_power = dbm_to_watt(parse_number(value, line_no));
        } else if (key == "ue_max_tx_power_w") {
            config.ue_max_tx_power = parse_number(value, line_no);
        } else {
            throw ConfigError(line_no, "unknown key '" + key + "'");
        }
    }
    if (tier) config.tiers.push_back(finish_tier(*tier));

    if (!have_ue_intensity) throw ConfigError(0, "missing key 'ue_intensity'");
    if (!have_bandwidth) throw ConfigError(0, "missing key 'bandwidth_mhz'");
    if (!have_noise)
        throw ConfigError(0, "missing key 'noise_dbm' or 'interference_limited'");
    if (!have_mode) throw ConfigError(0, "missing key 'access_mode'");
    if (config.tiers.empty()) throw ConfigError(0, "no [tier] blocks");

    config.validate();
    return config;
}

NetworkConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config(buf.str());
}

std::string save_config(const NetworkConfig& config) {
    std::ostringstream out;
    out << "ue_intensity = " << format_full(config.ue_intensity) << "\n";
    out << "bandwidth_hz = " << format_full(config.bandwidth) << "\n";
    if (config.noise_power > 0.0)
        out << "noise_w = " << format_full(config.noise_power) << "\n";
    else
        out << "interference_limited = true\n";
    out << "access_mode = " << to_string(config.access_mode) << "\n";
    if (config.ue_static_power > 0.0)
        out << "ue_static_power_w = " << format_full(config.ue_static_power) << "\n";
    if (config.ue_max_tx_power)
        out << "ue_max_tx_power_w = " << format_full(*config.ue_max_tx_power) << "\n";
    for (const auto& t : config.tiers) {
        out << "\n[tier]\n";
        out << "bs_intensity = " << format_full(t.bs_intensity) << "\n";
        out << "bs_power_w = " << format_full(t.bs_tx_power) << "\n";
        out << "alpha = " << format_full(t.path_loss_exp) << "\n";
        out << "epsilon = " << format_full(t.fpc_factor) << "\n";
        out << "baseline_ue_power_w = " << format_full(t.baseline_ue_power) << "\n";
        out << "sinr_threshold = " << format_full(t.sinr_threshold) << "\n";
    }
    return out.str();
}

namespace {

NetworkConfig two_tier_scenario(double small_intensity, double small_power_dbm,
                                double small_alpha) {
    NetworkConfig config;
    config.ue_intensity = 0.2;
    config.bandwidth = 20e6;
    config.noise_power = 0.0;
    config.access_mode = AccessMode::Duda;
    config.ue_max_tx_power = dbm_to_watt(23.0);

    TierParams macro;
    macro.bs_intensity = 0.01;
    macro.bs_tx_power = dbm_to_watt(43.0);
    macro.path_loss_exp = 4.3;
    macro.fpc_factor = 0.5;
    macro.baseline_ue_power = dbm_to_watt(-10.0);
    macro.sinr_threshold = db_to_linear(-10.0);

    TierParams small = macro;
    small.bs_intensity = small_intensity;
    small.bs_tx_power = dbm_to_watt(small_power_dbm);
    small.path_loss_exp = small_alpha;

    config.tiers = {macro, small};
    return config;
}

}  // namespace

NetworkConfig builtin_scenario(std::string_view name) {
    if (name == "table2_pico") return two_tier_scenario(0.04, 21.0, 3.8);
    if (name == "table2_femto") return two_tier_scenario(0.08, 17.0, 3.5);
    throw ConfigError(0, "unknown built-in scenario '" + std::string(name) +
                             "' (table2_pico, table2_femto)");
}

std::vector<std::string> builtin_scenario_names() {
    return {"table2_pico", "table2_femto"};
}

}  // namespace hetnet
