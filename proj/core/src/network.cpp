#include "hetnet/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hetnet {

const char* to_string(AccessMode mode) {
    switch (mode) {
        case AccessMode::Duda: return "duda";
        case AccessMode::CudaFading: return "cuda_fading";
        case AccessMode::CudaMeanFading: return "cuda_mean";
    }
    return "?";
}

std::optional<AccessMode> access_mode_from_string(const std::string& name) {
    if (name == "duda") return AccessMode::Duda;
    if (name == "cuda_fading") return AccessMode::CudaFading;
    if (name == "cuda_mean") return AccessMode::CudaMeanFading;
    return std::nullopt;
}

double NetworkConfig::total_bs_intensity() const {
    double sum = 0.0;
    for (const auto& t : tiers) sum += t.bs_intensity;
    return sum;
}

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw std::invalid_argument(field + ": " + what);
}

}  // namespace

void NetworkConfig::validate() const {
    require(!tiers.empty(), "tiers", "at least one tier required");
    require(ue_intensity > 0.0, "ue_intensity", "must be > 0");
    require(bandwidth > 0.0, "bandwidth", "must be > 0");
    require(noise_power >= 0.0, "noise_power", "must be >= 0");
    require(ue_static_power >= 0.0, "ue_static_power", "must be >= 0");
    if (ue_max_tx_power)
        require(*ue_max_tx_power > 0.0, "ue_max_tx_power", "must be > 0");
    for (std::size_t i = 0; i < tiers.size(); ++i) {
        const auto& t = tiers[i];
        const std::string tag = "tier[" + std::to_string(i) + "].";
        require(t.bs_intensity > 0.0, tag + "bs_intensity", "must be > 0");
        require(t.bs_tx_power > 0.0, tag + "bs_power", "must be > 0");
        require(t.path_loss_exp > 2.0, tag + "alpha", "must be > 2");
        require(t.fpc_factor >= 0.0 && t.fpc_factor <= 1.0, tag + "epsilon",
                "must be in [0, 1]");
        require(t.baseline_ue_power > 0.0, tag + "baseline_ue_power", "must be > 0");
        require(t.sinr_threshold >= 0.0, tag + "sinr_threshold", "must be >= 0");
    }
    require(total_bs_intensity() > 0.0, "tiers", "total BS intensity must be > 0");
}

double serving_distance_pdf(const NetworkConfig& config, std::size_t tier,
                            AccessMode mode, double r) {
    if (tier >= config.tiers.size())
        throw std::out_of_range("serving_distance_pdf: tier index");
    if (r < 0.0) throw std::invalid_argument("serving_distance_pdf: r must be >= 0");
    const double lambda = (mode == AccessMode::Duda)
                              ? config.total_bs_intensity()
                              : config.tiers[tier].bs_intensity;
    const double pi = std::numbers::pi;
    return 2.0 * pi * lambda * r * std::exp(-lambda * pi * r * r);
}

}  // namespace hetnet
