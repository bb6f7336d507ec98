#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hetnet {

/// Uplink association rule.
///   Duda            — serve the geographically closest BS, any tier.
///   CudaFading      — serve the tier whose (faded) downlink power is strongest.
///   CudaMeanFading  — serve the tier whose mean downlink power is strongest.
enum class AccessMode { Duda, CudaFading, CudaMeanFading };

const char* to_string(AccessMode mode);
std::optional<AccessMode> access_mode_from_string(const std::string& name);

/// One BS tier of the heterogeneous network. All values linear/SI.
struct TierParams {
    double bs_intensity = 0.0;       // BSs per m^2
    double bs_tx_power = 0.0;        // W
    double path_loss_exp = 0.0;      // > 2
    double fpc_factor = 0.0;         // in [0, 1]
    double baseline_ue_power = 0.0;  // W
    double sinr_threshold = 0.0;     // linear ratio
};

struct NetworkConfig {
    std::vector<TierParams> tiers;
    double ue_intensity = 0.0;  // UEs per m^2
    double bandwidth = 0.0;     // Hz
    double noise_power = 0.0;   // W; zero means interference-limited
    AccessMode access_mode = AccessMode::Duda;
    double ue_static_power = 0.0;             // W; carried, not used in EE
    std::optional<double> ue_max_tx_power;    // W; MC-only cap when requested

    std::size_t num_tiers() const { return tiers.size(); }
    double total_bs_intensity() const;  // lambda over all tiers

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct TierReport {
    double assoc_prob = 0.0;     // A_i
    double ue_per_tier = 0.0;    // N_i, UEs per m^2
    double ue_per_bs = 0.0;      // n_i
    double mean_rate = 0.0;      // nat/s per UE
    double se = 0.0;             // dimensionless
    double mean_tx_power = 0.0;  // W
    double ee = 0.0;             // nat/J
};

struct PerformanceReport {
    std::vector<TierReport> per_tier;
    double total_rate = 0.0;  // nat/s per m^2
    double total_se = 0.0;
    double total_ee = 0.0;
    // load_ratio(i, j) = n_i / n_j, row-major K x K
    std::vector<double> load_ratio;

    double load_ratio_at(std::size_t i, std::size_t j) const {
        return load_ratio[i * per_tier.size() + j];
    }
};

/// Serving-distance density f_R(r). CUDA modes use the per-tier nearest-BS
/// law Rayleigh(lambda_i); DUDA uses the superposed process Rayleigh(lambda_H).
double serving_distance_pdf(const NetworkConfig& config, std::size_t tier,
                            AccessMode mode, double r);

}  // namespace hetnet
