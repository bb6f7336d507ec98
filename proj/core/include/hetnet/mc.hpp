#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hetnet/network.hpp"
#include "hetnet/rng.hpp"

// Monte Carlo point-process oracle. Every analytic quantity has a sampling
// counterpart here that shares no code with the quadrature path: PPPs are
// dropped, associations resolved, powers and interference summed per drop.
//
// Determinism: each drop owns an RNG stream derived from (seed, drop index),
// per-drop values are buffered, and reductions are pairwise in drop order —
// results are bit-identical for a given seed regardless of thread count.

namespace hetnet::mc {

enum class InterfererMode {
    IndependentThinned,  // the field the analytic proof averages over
    OnePerBs             // one transmitter per occupied BS (realism probe)
};

struct McSettings {
    double region_radius = 0.0;  // meters; 0 selects the scenario default
    long num_drops = 100000;
    std::uint64_t seed = 1;
    InterfererMode interferer_mode = InterfererMode::IndependentThinned;
    int threads = 0;  // 0 = hardware concurrency
    bool apply_power_cap = false;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n = 0;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    double norm() const;
};

/// 10 / sqrt(min tier intensity).
double default_region_radius(const NetworkConfig& config);

/// Homogeneous PPP on a disk of the given radius around the origin.
std::vector<Point> sample_ppp(double intensity, double region_radius,
                              Xoshiro256pp& rng);

struct Association {
    std::size_t tier = 0;
    double distance = 0.0;
};

/// Resolve the serving BS of a UE at the origin. Throws std::runtime_error
/// when every tier is empty. CudaFading draws a fresh Exp(1) fade for each
/// tier's nearest candidate.
Association associate(const NetworkConfig& config,
                      const std::vector<std::vector<Point>>& bs_by_tier,
                      AccessMode mode, Xoshiro256pp& rng);

/// FPC transmit power baseline * d^(alpha*epsilon), optionally capped.
double fpc_power(double baseline, double alpha, double epsilon,
                 double serving_distance, std::optional<double> cap = std::nullopt);

/// One draw of the uplink interference power at the origin with exclusion
/// radius `serving_distance` (IndependentThinned field).
double sample_interference(const NetworkConfig& config, AccessMode mode,
                           const std::vector<double>& assoc,
                           double serving_distance, const McSettings& settings,
                           Xoshiro256pp& rng);

enum class McMetric { AssocProb, MeanPower, Rate, Se, Ee };

/// Point estimate of one analytic metric for one tier.
McEstimate estimate_metric(const NetworkConfig& config, McMetric metric,
                           std::size_t tier, AccessMode mode,
                           const McSettings& settings);

/// A Laplace-transform probe: the argument s is derived per epsilon set as
/// s = (e^t - 1) / (P_U,eps_tier * r^(alpha_tier*(eps_tier-1))), the same
/// map the rate integrand uses.
struct LaplaceProbe {
    double r = 1.0;          // exclusion radius / conditioning distance
    double t = 0.1;          // log-threshold the probe s corresponds to
    std::size_t tier = 0;    // tier whose map defines s
};

double laplace_probe_s(const NetworkConfig& config, const LaplaceProbe& probe);

/// E[exp(-s I)] at each probe for each epsilon assignment, from one shared
/// sampling pass (interferer geometry is epsilon-independent, powers are
/// re-evaluated per epsilon set). A small independent pass over the annulus
/// (region, 4*region) supplies the far-field factor of the transform, which
/// the disjointness of the PPP makes an exact product. Result layout:
/// [eps_set][probe].
std::vector<std::vector<McEstimate>> estimate_laplace_grid(
    const NetworkConfig& config, AccessMode mode,
    std::span<const std::vector<double>> epsilon_sets,
    std::span<const LaplaceProbe> probes, const McSettings& settings);

/// Convenience single-config, single-point Laplace estimate.
McEstimate estimate_laplace(const NetworkConfig& config, AccessMode mode,
                            const LaplaceProbe& probe, const McSettings& settings);

/// Mean-rate estimates for every tier and epsilon assignment from one
/// shared pass. Result layout: [eps_set][tier].
std::vector<std::vector<McEstimate>> estimate_rate_grid(
    const NetworkConfig& config, AccessMode mode,
    std::span<const std::vector<double>> epsilon_sets, const McSettings& settings);

/// Truncation-bias control: each drop is sampled on the configured region
/// and then extended to twice the radius from the same stream, so `shift`
/// (the change from doubling) carries almost no sampling noise. Estimates
/// are accepted when |shift| < base.std_error.
struct DoublingCheck {
    McEstimate base;    // estimate at the configured radius
    double shift = 0.0; // doubled-radius mean minus base mean
};

DoublingCheck laplace_doubling_check(const NetworkConfig& config, AccessMode mode,
                                     const LaplaceProbe& probe,
                                     const McSettings& settings);
DoublingCheck rate_doubling_check(const NetworkConfig& config, AccessMode mode,
                                  std::size_t tier, const McSettings& settings);

}  // namespace hetnet::mc
