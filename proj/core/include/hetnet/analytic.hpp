#pragma once

#include <cstddef>
#include <vector>

#include "hetnet/network.hpp"
#include "hetnet/quadrature.hpp"

// Analytic uplink performance of a K-tier network under fractional power
// control: association probabilities, the interference Laplace transform,
// outage-thresholded spatial average rate, spectrum efficiency, mean UE
// transmit power, and energy efficiency, for decoupled (DUDA) and coupled
// (CUDA) access.
//
// Rates are expected values of ln(1+SINR)*1[SINR > T] scaled by the per-UE
// bandwidth share W/n_i; they carry natural-log units (nat/s). Interference
// is averaged over per-tier UE fields thinned to intensity A_j*lambda_U,
// with i.i.d. Rayleigh serving distances for the interferers — the same
// independence structure the coverage expressions assume, and the structure
// the Monte Carlo oracle's IndependentThinned mode samples.

namespace hetnet::analytic {

/// A_i under nearest-BS association: lambda_i / lambda_total.
double assoc_prob_duda(const NetworkConfig& config, std::size_t tier);

/// A_i when the tier with the strongest mean downlink power wins.
double assoc_prob_cuda_mean(const NetworkConfig& config, std::size_t tier,
                            const QuadratureSpec& spec = {});

/// A_i when the tier with the strongest instantaneously faded downlink
/// power wins. Each tier competes through its nearest BS with an
/// independent Exp(1) power fade; pairwise loss factors are multiplied,
/// which is exact for two tiers.
double assoc_prob_cuda_fading(const NetworkConfig& config, std::size_t tier,
                              const QuadratureSpec& spec = {});

/// All tiers' association probabilities for the given mode.
std::vector<double> assoc_probs(const NetworkConfig& config, AccessMode mode,
                                const QuadratureSpec& spec = {});

struct UeCounts {
    std::vector<double> per_tier;  // N_i = A_i * lambda_U, UEs per m^2
    std::vector<double> per_bs;    // n_i = N_i / lambda_Bi

    double load_ratio(std::size_t i, std::size_t j) const {
        return per_bs[i] / per_bs[j];
    }
};

/// Exact arithmetic on a given association vector (must sum to 1).
UeCounts ue_counts(const NetworkConfig& config, const std::vector<double>& assoc);

struct LaplaceContext {
    const NetworkConfig& config;
    std::size_t tier;         // receiving tier i
    double serving_distance;  // r, exclusion radius of the interferer field
    double s;                 // Laplace argument
};

/// E[exp(-s*I)] of the uplink interference at the typical BS. `assoc`
/// supplies the per-tier thinning weights A_j for the chosen mode.
double laplace_interference(const LaplaceContext& ctx, AccessMode mode,
                            const std::vector<double>& assoc,
                            const QuadratureSpec& spec = {});

/// Spatial average rate of a UE served by tier i, nat/s.
double mean_rate(const NetworkConfig& config, std::size_t tier, AccessMode mode,
                 const QuadratureSpec& spec = {});
double mean_rate(const NetworkConfig& config, std::size_t tier, AccessMode mode,
                 const std::vector<double>& assoc, const QuadratureSpec& spec = {});

/// Network rate density: sum_i N_i * R_i, nat/s per m^2.
double total_rate(const NetworkConfig& config, AccessMode mode,
                  const QuadratureSpec& spec = {});

/// Per-tier spectrum efficiency. Evaluated with the integration order
/// swapped relative to mean_rate, so the SE_i = A_i*lambda_U*R_i/W identity
/// is a real two-route consistency check rather than a tautology.
double spectrum_efficiency(const NetworkConfig& config, std::size_t tier,
                           AccessMode mode, const QuadratureSpec& spec = {});
double spectrum_efficiency(const NetworkConfig& config, std::size_t tier,
                           AccessMode mode, const std::vector<double>& assoc,
                           const QuadratureSpec& spec = {});
double total_spectrum_efficiency(const NetworkConfig& config, AccessMode mode,
                                 const QuadratureSpec& spec = {});

/// Mean FPC transmit power of a tier-i UE (closed form).
double mean_ue_power(const NetworkConfig& config, std::size_t tier, AccessMode mode);

/// EE_i = R_i / E[P_i], nat/J.
double energy_efficiency(const NetworkConfig& config, std::size_t tier,
                         AccessMode mode, const QuadratureSpec& spec = {});
/// Network EE = sum_i R_i*N_i / sum_j E[P_j]*N_j.
double total_energy_efficiency(const NetworkConfig& config, AccessMode mode,
                               const QuadratureSpec& spec = {});

/// Everything at once, sharing the association computation.
PerformanceReport performance_report(const NetworkConfig& config, AccessMode mode,
                                     const QuadratureSpec& spec = {});

}  // namespace hetnet::analytic
