#include "hetnet/analytic.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "hetnet/special_functions.hpp"
#include "hyp2f1_cache.hpp"

namespace hetnet::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

void check_tier(const NetworkConfig& config, std::size_t tier) {
    if (tier >= config.tiers.size())
        throw std::out_of_range("tier index out of range");
}

QuadratureSpec tighter(const QuadratureSpec& spec, double factor) {
    return {spec.rel_tol / factor, spec.abs_tol / factor, spec.max_subdivisions};
}

}  // namespace

double assoc_prob_duda(const NetworkConfig& config, std::size_t tier) {
    check_tier(config, tier);
    return config.tiers[tier].bs_intensity / config.total_bs_intensity();
}

double assoc_prob_cuda_mean(const NetworkConfig& config, std::size_t tier,
                            const QuadratureSpec& spec) {
    check_tier(config, tier);
    if (config.tiers.size() == 1) return 1.0;
    const auto& ti = config.tiers[tier];
    // P[no tier beats tier i's mean power at candidate distance r] =
    // exp(-pi * sum_{j != i} lambda_j (P_j/P_i)^(2/a_j) r^(2 a_i/a_j));
    // the own-tier null term is exactly the Rayleigh(lambda_i) weight of the
    // candidate distance, absorbed by the expectation map.
    std::vector<double> coeff, expo;
    for (const auto& tj : config.tiers) {
        coeff.push_back(tj.bs_intensity *
                        std::pow(tj.bs_tx_power / ti.bs_tx_power,
                                 2.0 / tj.path_loss_exp));
        expo.push_back(2.0 * ti.path_loss_exp / tj.path_loss_exp);
    }
    auto survive = [&](double r) {
        double s = 0.0;
        for (std::size_t j = 0; j < coeff.size(); ++j) {
            if (j == tier) continue;
            s += coeff[j] * std::pow(r, expo[j]);
        }
        return std::exp(-kPi * s);
    };
    return rayleigh_expectation(survive, ti.bs_intensity, spec).value;
}

double assoc_prob_cuda_fading(const NetworkConfig& config, std::size_t tier,
                              const QuadratureSpec& spec) {
    check_tier(config, tier);
    const std::size_t k = config.tiers.size();
    if (k == 1) return 1.0;

    const auto& ti = config.tiers[tier];
    const QuadratureSpec inner_spec = tighter(spec, 10.0);
    double prob = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == tier) continue;
        const auto& tj = config.tiers[j];
        const double beta =
            tj.bs_intensity *
            std::pow(tj.bs_tx_power / ti.bs_tx_power, 2.0 / tj.path_loss_exp);
        const double zexp = 2.0 / tj.path_loss_exp;
        const double rexp = 2.0 * ti.path_loss_exp / tj.path_loss_exp;
        // P[tier j's best faded candidate loses] =
        //   E_Z E_R [ exp(-pi*beta*Z^(2/aj)*R^(2ai/aj)) ],
        // Z the fading ratio with density 1/(1+z)^2, R ~ Rayleigh(lambda_i).
        // The outer map zeta = 1/(1+z) is the CDF, flattening f_Z to 1.
        auto outer = [&](double zeta) {
            const double z = (1.0 - zeta) / zeta;
            const double zfac = std::pow(z, zexp);
            auto survive = [&](double r) {
                return std::exp(-kPi * beta * zfac * std::pow(r, rexp));
            };
            return rayleigh_expectation(survive, ti.bs_intensity, inner_spec).value;
        };
        prob *= integrate(outer, 0.0, 1.0, spec).value;
    }
    return prob;
}

std::vector<double> assoc_probs(const NetworkConfig& config, AccessMode mode,
                                const QuadratureSpec& spec) {
    std::vector<double> probs(config.tiers.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        switch (mode) {
            case AccessMode::Duda: probs[i] = assoc_prob_duda(config, i); break;
            case AccessMode::CudaMeanFading:
                probs[i] = assoc_prob_cuda_mean(config, i, spec);
                break;
            case AccessMode::CudaFading:
                probs[i] = assoc_prob_cuda_fading(config, i, spec);
                break;
        }
    }
    return probs;
}

UeCounts ue_counts(const NetworkConfig& config, const std::vector<double>& assoc) {
    if (assoc.size() != config.tiers.size())
        throw std::invalid_argument("ue_counts: assoc size mismatch");
    double sum = 0.0;
    for (double a : assoc) sum += a;
    if (std::abs(sum - 1.0) > 1e-4)
        throw std::invalid_argument("ue_counts: association probabilities sum to " +
                                    std::to_string(sum));
    UeCounts counts;
    for (std::size_t i = 0; i < assoc.size(); ++i) {
        counts.per_tier.push_back(assoc[i] * config.ue_intensity);
        counts.per_bs.push_back(counts.per_tier[i] / config.tiers[i].bs_intensity);
    }
    return counts;
}

namespace {

// Interferer-field law for tier j: serving distances are Rayleigh with the
// whole-process intensity in DUDA and the own-tier intensity in CUDA.
double interferer_distance_intensity(const NetworkConfig& config, std::size_t j,
                                     AccessMode mode) {
    return mode == AccessMode::Duda ? config.total_bs_intensity()
                                    : config.tiers[j].bs_intensity;
}

// One tier's Laplace factor exp(-2*pi*A_j*lambda_U * E_Rv[G]) with
//   G(Q, r) = Q*r^(2-a)/(a-2) * 2F1(1, 1-2/a; 2-2/a; -Q/r^a),
//   Q = s * P_Uj * Rv^(a_j e_j),
// the closed form of Int_r^inf (1 - 1/(1 + Q x^-a)) x dx. Each interferer
// carries its own i.i.d. serving distance Rv, so the PGFL of the marked
// PPP averages the per-interferer coupling inside the exponent; taking the
// expectation outside instead (one shared Rv per tier) overstates the
// transform by the Jensen gap, badly so for large s. The expectation is
// evaluated in radial space with the Rayleigh weight explicit and 2F1
// comes from the per-alpha ray table.
double tier_laplace_factor(const NetworkConfig& config, std::size_t j,
                           AccessMode mode, double a_j_lambda_u, double r,
                           double s, const QuadratureSpec& spec) {
    const auto& tj = config.tiers[j];
    const double alpha = tj.path_loss_exp;
    const double alpha_eps = alpha * tj.fpc_factor;
    const double r_pow = std::pow(r, 2.0 - alpha) / (alpha - 2.0);
    const double neg_inv_r_alpha = -std::pow(r, -alpha);
    const double thin = 2.0 * kPi * a_j_lambda_u;
    const double s_base = s * tj.baseline_ue_power;
    const auto& hyp = detail::hyp2f1_table_for(alpha);

    if (alpha_eps == 0.0) {  // no compensation: G is Rv-independent
        return std::exp(-thin * s_base * r_pow * hyp(neg_inv_r_alpha * s_base));
    }

    const double lambda = interferer_distance_intensity(config, j, mode);
    const double two_pi_lam = 2.0 * kPi * lambda;
    const double scale = 1.0 / std::sqrt(kPi * lambda);  // Rayleigh mode scale
    auto integrand = [&](double y) {
        const double om = 1.0 - y;
        const double w = scale * y / om;
        const double q = s_base * std::pow(w, alpha_eps);
        const double g = q * r_pow * hyp(neg_inv_r_alpha * q);
        const double weight = two_pi_lam * w * std::exp(-kPi * lambda * w * w);
        return g * weight * scale / (om * om);
    };
    const double mean_exponent = integrate(integrand, 0.0, 1.0, spec).value;
    return std::exp(-thin * mean_exponent);
}

}  // namespace

double laplace_interference(const LaplaceContext& ctx, AccessMode mode,
                            const std::vector<double>& assoc,
                            const QuadratureSpec& spec) {
    const NetworkConfig& config = ctx.config;
    check_tier(config, ctx.tier);
    if (!(ctx.serving_distance > 0.0))
        throw std::invalid_argument("laplace_interference: serving distance must be > 0");
    if (ctx.s < 0.0)
        throw std::invalid_argument("laplace_interference: s must be >= 0");
    if (ctx.s == 0.0) return 1.0;

    double product = 1.0;
    for (std::size_t j = 0; j < config.tiers.size(); ++j) {
        product *= tier_laplace_factor(config, j, mode,
                                       assoc[j] * config.ue_intensity,
                                       ctx.serving_distance, ctx.s, spec);
    }
    return product;
}

namespace {

// Shared coverage kernel: P[SINR > e^t - 1 | serving distance r] =
// L(s)*exp(-s*sigma^2) with s = (e^t - 1) / (P_Ui * r^(a_i*(e_i-1))).
struct CoverageKernel {
    const NetworkConfig& config;
    std::size_t tier;
    AccessMode mode;
    const std::vector<double>& assoc;
    QuadratureSpec laplace_spec;

    double s_of(double r, double t) const {
        const auto& ti = config.tiers[tier];
        const double gain =
            ti.baseline_ue_power *
            std::pow(r, ti.path_loss_exp * (ti.fpc_factor - 1.0));
        return std::expm1(t) / gain;
    }

    double operator()(double r, double t) const {
        if (t > 700.0) return 0.0;  // e^t overflows; coverage is long gone
        const double s = s_of(r, t);
        const double lap = laplace_interference({config, tier, r, s}, mode,
                                                assoc, laplace_spec);
        const double noise = config.noise_power > 0.0
                                 ? std::exp(-s * config.noise_power)
                                 : 1.0;
        return lap * noise;
    }
};

// Integral of coverage over t in (t0, inf) plus the t0 * coverage(t0) mass
// of the outage-thresholded rate, for fixed serving distance r.
double rate_t_integral(const CoverageKernel& cov, double r, double t0,
                       const QuadratureSpec& spec) {
    auto tail = [&](double y) {
        const double om = 1.0 - y;
        return cov(r, t0 + y / om) / (om * om);
    };
    const double tail_part = integrate(tail, 0.0, 1.0, spec).value;
    return tail_part + t0 * cov(r, t0);
}

}  // namespace

double mean_rate(const NetworkConfig& config, std::size_t tier, AccessMode mode,
                 const std::vector<double>& assoc, const QuadratureSpec& spec) {
    check_tier(config, tier);
    const double t0 = std::log1p(config.tiers[tier].sinr_threshold);
    const CoverageKernel cov{config, tier, mode, assoc, tighter(spec, 100.0)};
    const QuadratureSpec inner = tighter(spec, 10.0);

    // Outer expectation over the typical link distance r ~ Rayleigh(lambda_U):
    // E[ t0*P(cov at t0) + Int_t0^inf P(cov at t) dt ]. Radial space: under
    // partial compensation the conditional rate grows like log(1/r) at 0.
    auto per_distance = [&](double r) { return rate_t_integral(cov, r, t0, inner); };
    const double expectation =
        rayleigh_expectation_radial(per_distance, config.ue_intensity, spec).value;

    const double n_i = assoc[tier] * config.ue_intensity /
                       config.tiers[tier].bs_intensity;
    return config.bandwidth / n_i * expectation;
}

double mean_rate(const NetworkConfig& config, std::size_t tier, AccessMode mode,
                 const QuadratureSpec& spec) {
    return mean_rate(config, tier, mode, assoc_probs(config, mode, spec), spec);
}

double total_rate(const NetworkConfig& config, AccessMode mode,
                  const QuadratureSpec& spec) {
    const auto assoc = assoc_probs(config, mode, spec);
    double sum = 0.0;
    for (std::size_t i = 0; i < config.tiers.size(); ++i)
        sum += assoc[i] * config.ue_intensity * mean_rate(config, i, mode, assoc, spec);
    return sum;
}

double spectrum_efficiency(const NetworkConfig& config, std::size_t tier,
                           AccessMode mode, const std::vector<double>& assoc,
                           const QuadratureSpec& spec) {
    check_tier(config, tier);
    const double t0 = std::log1p(config.tiers[tier].sinr_threshold);
    const CoverageKernel cov{config, tier, mode, assoc, tighter(spec, 100.0)};
    const QuadratureSpec inner = tighter(spec, 10.0);

    // Same double integral as mean_rate but with t outermost. The r-integral
    // against r*exp(-lambda_U*pi*r^2) is 1/(2*pi*lambda_U) times a Rayleigh
    // expectation, which cancels the 2*pi*lambda_Bi*lambda_U prefactor down
    // to lambda_Bi.
    auto r_avg = [&](double t) {
        auto f = [&](double r) { return cov(r, t); };
        return rayleigh_expectation_radial(f, config.ue_intensity, inner).value;
    };
    auto tail = [&](double y) {
        const double om = 1.0 - y;
        return r_avg(t0 + y / om) / (om * om);
    };
    const double tail_part = integrate(tail, 0.0, 1.0, spec).value;
    const double atom = t0 * r_avg(t0);
    return config.tiers[tier].bs_intensity * (tail_part + atom);
}

double spectrum_efficiency(const NetworkConfig& config, std::size_t tier,
                           AccessMode mode, const QuadratureSpec& spec) {
    return spectrum_efficiency(config, tier, mode, assoc_probs(config, mode, spec),
                               spec);
}

double total_spectrum_efficiency(const NetworkConfig& config, AccessMode mode,
                                 const QuadratureSpec& spec) {
    const auto assoc = assoc_probs(config, mode, spec);
    double sum = 0.0;
    for (std::size_t i = 0; i < config.tiers.size(); ++i)
        sum += spectrum_efficiency(config, i, mode, assoc, spec);
    return sum;
}

double mean_ue_power(const NetworkConfig& config, std::size_t tier, AccessMode mode) {
    check_tier(config, tier);
    const auto& t = config.tiers[tier];
    const double lambda = interferer_distance_intensity(config, tier, mode);
    const double half_ae = 0.5 * t.path_loss_exp * t.fpc_factor;
    return t.baseline_ue_power * std::pow(lambda * kPi, -half_ae) *
           gamma_fn(half_ae + 1.0);
}

double energy_efficiency(const NetworkConfig& config, std::size_t tier,
                         AccessMode mode, const QuadratureSpec& spec) {
    return mean_rate(config, tier, mode, spec) / mean_ue_power(config, tier, mode);
}

double total_energy_efficiency(const NetworkConfig& config, AccessMode mode,
                               const QuadratureSpec& spec) {
    const auto assoc = assoc_probs(config, mode, spec);
    double rate_sum = 0.0, power_sum = 0.0;
    for (std::size_t i = 0; i < config.tiers.size(); ++i) {
        const double n_i = assoc[i] * config.ue_intensity;
        rate_sum += mean_rate(config, i, mode, assoc, spec) * n_i;
        power_sum += mean_ue_power(config, i, mode) * n_i;
    }
    return rate_sum / power_sum;
}

PerformanceReport performance_report(const NetworkConfig& config, AccessMode mode,
                                     const QuadratureSpec& spec) {
    const auto assoc = assoc_probs(config, mode, spec);
    const auto counts = ue_counts(config, assoc);
    const std::size_t k = config.tiers.size();

    PerformanceReport report;
    report.per_tier.resize(k);
    // the two double integrals per tier are independent pure functions
    std::vector<std::future<std::pair<double, double>>> heavy;
    heavy.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        heavy.push_back(std::async(std::launch::async, [&, i] {
            return std::make_pair(mean_rate(config, i, mode, assoc, spec),
                                  spectrum_efficiency(config, i, mode, assoc, spec));
        }));
    double power_weighted = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        auto& row = report.per_tier[i];
        row.assoc_prob = assoc[i];
        row.ue_per_tier = counts.per_tier[i];
        row.ue_per_bs = counts.per_bs[i];
        std::tie(row.mean_rate, row.se) = heavy[i].get();
        row.mean_tx_power = mean_ue_power(config, i, mode);
        row.ee = row.mean_rate / row.mean_tx_power;
        report.total_rate += row.ue_per_tier * row.mean_rate;
        report.total_se += row.se;
        power_weighted += row.mean_tx_power * row.ue_per_tier;
    }
    report.total_ee = report.total_rate / power_weighted;
    report.load_ratio.resize(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            report.load_ratio[i * k + j] = counts.load_ratio(i, j);
    return report;
}

}  // namespace hetnet::analytic
