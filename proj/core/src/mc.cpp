#include "hetnet/mc.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "hetnet/analytic.hpp"

namespace hetnet::mc {

namespace {

constexpr double kPi = std::numbers::pi;

// Radius at which the probability of finding no point of a PPP with the
// given intensity is e^-45, i.e. negligible against any standard error.
double nearest_safe_radius(double intensity) {
    return std::sqrt(45.0 / (kPi * intensity));
}

int resolve_threads(int requested, long drops) {
    int t = requested > 0 ? requested
                          : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    return static_cast<int>(std::min<long>(t, std::max<long>(drops, 1)));
}

template <class Fn>
void for_each_drop(long num_drops, int threads, Fn&& fn) {
    const int t = resolve_threads(threads, num_drops);
    if (t == 1) {
        for (long d = 0; d < num_drops; ++d) fn(d);
        return;
    }
    std::atomic<long> cursor{0};
    constexpr long kChunk = 128;
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (int k = 0; k < t; ++k) {
        pool.emplace_back([&] {
            for (;;) {
                const long start = cursor.fetch_add(kChunk);
                if (start >= num_drops) return;
                const long end = std::min(num_drops, start + kChunk);
                for (long d = start; d < end; ++d) fn(d);
            }
        });
    }
    for (auto& th : pool) th.join();
}

double pairwise_sum(const double* v, long n, long stride) {
    if (n <= 16) {
        double s = 0.0;
        for (long i = 0; i < n; ++i) s += v[i * stride];
        return s;
    }
    const long half = n / 2;
    return pairwise_sum(v, half, stride) +
           pairwise_sum(v + half * stride, n - half, stride);
}

double pairwise_sq_dev(const double* v, long n, long stride, double mean) {
    if (n <= 16) {
        double s = 0.0;
        for (long i = 0; i < n; ++i) {
            const double d = v[i * stride] - mean;
            s += d * d;
        }
        return s;
    }
    const long half = n / 2;
    return pairwise_sq_dev(v, half, stride, mean) +
           pairwise_sq_dev(v + half * stride, n - half, stride, mean);
}

// Column `col` of a row-major (num_drops x width) buffer -> estimate.
McEstimate column_estimate(const std::vector<double>& values, long num_drops,
                           std::size_t width, std::size_t col) {
    const double* base = values.data() + col;
    const double sum = pairwise_sum(base, num_drops, static_cast<long>(width));
    const double mean = sum / static_cast<double>(num_drops);
    // a single drop carries no spread information: report an unbounded SE
    double se = std::numeric_limits<double>::infinity();
    if (num_drops > 1) {
        const double ss =
            pairwise_sq_dev(base, num_drops, static_cast<long>(width), mean);
        se = std::sqrt(ss / (static_cast<double>(num_drops - 1) *
                             static_cast<double>(num_drops)));
    }
    return {mean, se, num_drops};
}

}  // namespace

double Point::norm() const { return std::hypot(x, y); }

double default_region_radius(const NetworkConfig& config) {
    double min_intensity = std::numeric_limits<double>::infinity();
    for (const auto& t : config.tiers)
        min_intensity = std::min(min_intensity, t.bs_intensity);
    return 10.0 / std::sqrt(min_intensity);
}

std::vector<Point> sample_ppp(double intensity, double region_radius,
                              Xoshiro256pp& rng) {
    if (intensity < 0.0) throw std::invalid_argument("sample_ppp: intensity < 0");
    std::vector<Point> points;
    if (intensity == 0.0) return points;
    const double area = kPi * region_radius * region_radius;
    const std::uint64_t count = rng.poisson(intensity * area);
    points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        // radius via sqrt of a uniform squared radius, angle uniform
        const double d = region_radius * std::sqrt(rng.uniform());
        const double phi = 2.0 * kPi * rng.uniform();
        points.push_back({d * std::cos(phi), d * std::sin(phi)});
    }
    return points;
}

namespace {

double nearest_distance(const std::vector<Point>& points) {
    double best2 = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        const double d2 = p.x * p.x + p.y * p.y;
        if (d2 < best2) best2 = d2;
    }
    return std::sqrt(best2);
}

}  // namespace

Association associate(const NetworkConfig& config,
                      const std::vector<std::vector<Point>>& bs_by_tier,
                      AccessMode mode, Xoshiro256pp& rng) {
    if (bs_by_tier.size() != config.tiers.size())
        throw std::invalid_argument("associate: tier count mismatch");

    std::size_t best_tier = 0;
    double best_metric = -std::numeric_limits<double>::infinity();
    double best_distance = 0.0;
    bool any = false;
    for (std::size_t j = 0; j < bs_by_tier.size(); ++j) {
        if (bs_by_tier[j].empty()) continue;
        const double d = nearest_distance(bs_by_tier[j]);
        double metric = 0.0;
        switch (mode) {
            case AccessMode::Duda:
                metric = -d;
                break;
            case AccessMode::CudaMeanFading:
                metric = std::log(config.tiers[j].bs_tx_power) -
                         config.tiers[j].path_loss_exp * std::log(d);
                break;
            case AccessMode::CudaFading:
                metric = std::log(config.tiers[j].bs_tx_power) +
                         std::log(rng.exponential()) -
                         config.tiers[j].path_loss_exp * std::log(d);
                break;
        }
        if (!any || metric > best_metric) {
            any = true;
            best_metric = metric;
            best_tier = j;
            best_distance = d;
        }
    }
    if (!any) throw std::runtime_error("associate: no BS in any tier");
    return {best_tier, best_distance};
}

double fpc_power(double baseline, double alpha, double epsilon,
                 double serving_distance, std::optional<double> cap) {
    double p = baseline * std::pow(serving_distance, alpha * epsilon);
    if (cap && p > *cap) p = *cap;
    return p;
}

namespace {

// Per-tier constants of the thinned interferer field, hoisted out of the
// sampling loops.
struct TierField {
    double thinned_intensity;  // A_j * lambda_U
    double alpha;
    double neg_half_alpha;
    double inv_pi_lambda_rv;  // 1 / (pi * lambda of the Rv law)
    double baseline;
};

std::vector<TierField> make_fields(const NetworkConfig& config, AccessMode mode,
                                   const std::vector<double>& assoc) {
    std::vector<TierField> fields(config.tiers.size());
    for (std::size_t j = 0; j < config.tiers.size(); ++j) {
        const auto& t = config.tiers[j];
        const double lambda_rv = mode == AccessMode::Duda
                                     ? config.total_bs_intensity()
                                     : t.bs_intensity;
        fields[j] = {assoc[j] * config.ue_intensity, t.path_loss_exp,
                     -0.5 * t.path_loss_exp, 1.0 / (kPi * lambda_rv),
                     t.baseline_ue_power};
    }
    return fields;
}

}  // namespace

double sample_interference(const NetworkConfig& config, AccessMode mode,
                           const std::vector<double>& assoc,
                           double serving_distance, const McSettings& settings,
                           Xoshiro256pp& rng) {
    if (!(serving_distance > 0.0))
        throw std::invalid_argument("sample_interference: serving distance must be > 0");
    const double region = settings.region_radius > 0.0
                              ? settings.region_radius
                              : default_region_radius(config);
    const double r2 = serving_distance * serving_distance;
    const double R2 = region * region;
    if (R2 <= r2) return 0.0;

    const std::optional<double> cap =
        settings.apply_power_cap ? config.ue_max_tx_power : std::nullopt;
    double total = 0.0;
    for (std::size_t j = 0; j < config.tiers.size(); ++j) {
        const auto& t = config.tiers[j];
        const double lambda_rv = mode == AccessMode::Duda
                                     ? config.total_bs_intensity()
                                     : t.bs_intensity;
        const std::uint64_t count =
            rng.poisson(assoc[j] * config.ue_intensity * kPi * (R2 - r2));
        for (std::uint64_t v = 0; v < count; ++v) {
            const double d2 = r2 + rng.uniform() * (R2 - r2);
            const double rv = std::sqrt(rng.exponential() / (kPi * lambda_rv));
            const double h = rng.exponential();
            const double tx = fpc_power(t.baseline_ue_power, t.path_loss_exp,
                                        t.fpc_factor, rv, cap);
            total += tx * h * std::pow(d2, -0.5 * t.path_loss_exp);
        }
    }
    return total;
}

namespace {

// ---- association / mean-power estimators -------------------------------

McEstimate estimate_assoc_prob(const NetworkConfig& config, std::size_t tier,
                               AccessMode mode, const McSettings& settings) {
    const double region = settings.region_radius > 0.0
                              ? settings.region_radius
                              : default_region_radius(config);
    const long n = settings.num_drops;
    std::vector<double> values(static_cast<std::size_t>(n));
    for_each_drop(n, settings.threads, [&](long d) {
        auto rng = drop_stream(settings.seed, static_cast<std::uint64_t>(d));
        std::vector<std::vector<Point>> bs(config.tiers.size());
        for (;;) {
            bool any = false;
            for (std::size_t j = 0; j < config.tiers.size(); ++j) {
                bs[j] = sample_ppp(config.tiers[j].bs_intensity, region, rng);
                any = any || !bs[j].empty();
            }
            if (any) break;  // an all-empty draw is astronomically unlikely
        }
        const Association a = associate(config, bs, mode, rng);
        values[static_cast<std::size_t>(d)] = a.tier == tier ? 1.0 : 0.0;
    });
    return column_estimate(values, n, 1, 0);
}

McEstimate estimate_mean_power(const NetworkConfig& config, std::size_t tier,
                               AccessMode mode, const McSettings& settings) {
    // The closed form averages transmit power over the unconditional
    // nearest-point distance: whole process (DUDA) or own tier (CUDA).
    const bool duda = mode == AccessMode::Duda;
    const double lambda_law =
        duda ? config.total_bs_intensity() : config.tiers[tier].bs_intensity;
    const double region = settings.region_radius > 0.0
                              ? settings.region_radius
                              : nearest_safe_radius(lambda_law);
    const auto& ti = config.tiers[tier];
    const std::optional<double> cap =
        settings.apply_power_cap ? config.ue_max_tx_power : std::nullopt;

    const long n = settings.num_drops;
    std::vector<double> values(static_cast<std::size_t>(n));
    for_each_drop(n, settings.threads, [&](long d) {
        auto rng = drop_stream(settings.seed, static_cast<std::uint64_t>(d));
        double dist = 0.0;
        for (;;) {
            double best2 = std::numeric_limits<double>::infinity();
            if (duda) {
                for (const auto& t : config.tiers)
                    for (const auto& p : sample_ppp(t.bs_intensity, region, rng)) {
                        const double d2 = p.x * p.x + p.y * p.y;
                        if (d2 < best2) best2 = d2;
                    }
            } else {
                for (const auto& p : sample_ppp(ti.bs_intensity, region, rng)) {
                    const double d2 = p.x * p.x + p.y * p.y;
                    if (d2 < best2) best2 = d2;
                }
            }
            if (std::isfinite(best2)) {
                dist = std::sqrt(best2);
                break;
            }
        }
        values[static_cast<std::size_t>(d)] =
            fpc_power(ti.baseline_ue_power, ti.path_loss_exp, ti.fpc_factor, dist, cap);
    });
    return column_estimate(values, n, 1, 0);
}

// ---- shared interferer-pass machinery -----------------------------------

// Epsilon-dependent per-tier constants for evaluating interferer transmit
// power under several epsilon assignments from one geometric sample.
struct EpsTable {
    // [eps_set][tier]: alpha_j * eps_j
    std::vector<std::vector<double>> alpha_eps;
    std::size_t n_sets = 0;
};

EpsTable make_eps_table(const NetworkConfig& config,
                        std::span<const std::vector<double>> epsilon_sets) {
    EpsTable table;
    table.n_sets = epsilon_sets.size();
    for (const auto& eps : epsilon_sets) {
        if (eps.size() != config.tiers.size())
            throw std::invalid_argument("epsilon set size mismatch");
        std::vector<double> row(config.tiers.size());
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] = config.tiers[j].path_loss_exp * eps[j];
        table.alpha_eps.push_back(std::move(row));
    }
    return table;
}

NetworkConfig with_epsilons(const NetworkConfig& config,
                            const std::vector<double>& eps) {
    NetworkConfig c = config;
    for (std::size_t j = 0; j < c.tiers.size(); ++j) c.tiers[j].fpc_factor = eps[j];
    return c;
}

// Adds the interference of interferers in the annulus (r_lo, r_hi) to
// inter[eps_set], one entry per epsilon assignment.
void add_annulus_interference(const std::vector<TierField>& fields,
                              const EpsTable& eps, double r_lo2, double r_hi2,
                              std::optional<double> cap, Xoshiro256pp& rng,
                              double* inter) {
    const double span2 = r_hi2 - r_lo2;
    for (std::size_t j = 0; j < fields.size(); ++j) {
        const TierField& f = fields[j];
        const std::uint64_t count = rng.poisson(f.thinned_intensity * kPi * span2);
        for (std::uint64_t v = 0; v < count; ++v) {
            const double d2 = r_lo2 + rng.uniform() * span2;
            const double attn = std::exp(f.neg_half_alpha * std::log(d2));
            const double ln_rv = 0.5 * std::log(rng.exponential() * f.inv_pi_lambda_rv);
            const double h_attn = rng.exponential() * attn;
            for (std::size_t e = 0; e < eps.n_sets; ++e) {
                double tx = f.baseline * std::exp(eps.alpha_eps[e][j] * ln_rv);
                if (cap && tx > *cap) tx = *cap;
                inter[e] += tx * h_attn;
            }
        }
    }
}

}  // namespace

double laplace_probe_s(const NetworkConfig& config, const LaplaceProbe& probe) {
    const auto& t = config.tiers.at(probe.tier);
    const double gain =
        t.baseline_ue_power *
        std::pow(probe.r, t.path_loss_exp * (t.fpc_factor - 1.0));
    return std::expm1(probe.t) / gain;
}

std::vector<std::vector<McEstimate>> estimate_laplace_grid(
    const NetworkConfig& config, AccessMode mode,
    std::span<const std::vector<double>> epsilon_sets,
    std::span<const LaplaceProbe> probes, const McSettings& settings) {
    if (probes.empty() || epsilon_sets.empty())
        throw std::invalid_argument("estimate_laplace_grid: empty grid");
    if (settings.num_drops < 1)
        throw std::invalid_argument("estimate_laplace_grid: num_drops must be >= 1");
    if (settings.interferer_mode != InterfererMode::IndependentThinned)
        throw std::invalid_argument(
            "estimate_laplace_grid: only IndependentThinned interference has a "
            "conditional Laplace transform");

    const auto assoc = analytic::assoc_probs(config, mode);
    const auto fields = make_fields(config, mode, assoc);
    const EpsTable eps = make_eps_table(config, epsilon_sets);
    const double region = settings.region_radius > 0.0
                              ? settings.region_radius
                              : default_region_radius(config);

    // Band boundaries: sorted unique exclusion radii, then the region edge.
    std::vector<double> bounds;
    for (const auto& p : probes) {
        if (!(p.r > 0.0) || p.r >= region)
            throw std::invalid_argument("estimate_laplace_grid: bad probe radius");
        bounds.push_back(p.r);
    }
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    const std::size_t n_bands = bounds.size();

    // s per (eps_set, probe) and the band index each probe starts at.
    const std::size_t n_probes = probes.size();
    std::vector<double> s_of(epsilon_sets.size() * n_probes);
    std::vector<std::size_t> band_of(n_probes);
    for (std::size_t p = 0; p < n_probes; ++p) {
        band_of[p] = static_cast<std::size_t>(
            std::lower_bound(bounds.begin(), bounds.end(), probes[p].r) -
            bounds.begin());
        for (std::size_t e = 0; e < epsilon_sets.size(); ++e)
            s_of[e * n_probes + p] =
                laplace_probe_s(with_epsilons(config, epsilon_sets[e]), probes[p]);
    }

    const std::optional<double> cap =
        settings.apply_power_cap ? config.ue_max_tx_power : std::nullopt;
    const long n = settings.num_drops;
    const std::size_t width = epsilon_sets.size() * n_probes;
    std::vector<double> values(static_cast<std::size_t>(n) * width);

    for_each_drop(n, settings.threads, [&](long d) {
        auto rng = drop_stream(settings.seed, static_cast<std::uint64_t>(d));
        // inter[band][eps]: interference of each annulus under each epsilon
        std::vector<double> inter(n_bands * eps.n_sets, 0.0);
        for (std::size_t k = 0; k < n_bands; ++k) {
            const double lo2 = bounds[k] * bounds[k];
            const double hi2 =
                (k + 1 < n_bands) ? bounds[k + 1] * bounds[k + 1] : region * region;
            add_annulus_interference(fields, eps, lo2, hi2, cap, rng,
                                     inter.data() + k * eps.n_sets);
        }
        // suffix sums: interference seen with exclusion radius bounds[k]
        for (std::size_t k = n_bands - 1; k-- > 0;)
            for (std::size_t e = 0; e < eps.n_sets; ++e)
                inter[k * eps.n_sets + e] += inter[(k + 1) * eps.n_sets + e];

        double* row = values.data() + static_cast<std::size_t>(d) * width;
        for (std::size_t e = 0; e < eps.n_sets; ++e)
            for (std::size_t p = 0; p < n_probes; ++p)
                row[e * n_probes + p] = std::exp(
                    -s_of[e * n_probes + p] * inter[band_of[p] * eps.n_sets + e]);
    });

    // Far-field stage: the PPP is independent across disjoint regions, so
    // E[e^{-sI}] factors into the per-drop region and the annulus
    // (region, 4*region). The far factor is close to 1 with tiny variance,
    // so a small independent run removes most of the truncation bias that
    // full-compensation interferers would otherwise leave. Beyond 4R the
    // residual is two orders below the main-stage standard error.
    const long far_n = std::max<long>(1000, n / 50);
    std::vector<double> far_values(static_cast<std::size_t>(far_n) * width);
    for_each_drop(far_n, settings.threads, [&](long d) {
        auto rng = drop_stream(settings.seed ^ 0x6a09e667f3bcc909ULL,
                               static_cast<std::uint64_t>(d));
        std::vector<double> inter(eps.n_sets, 0.0);
        add_annulus_interference(fields, eps, region * region,
                                 16.0 * region * region, cap, rng, inter.data());
        double* row = far_values.data() + static_cast<std::size_t>(d) * width;
        for (std::size_t e = 0; e < eps.n_sets; ++e)
            for (std::size_t p = 0; p < n_probes; ++p)
                row[e * n_probes + p] =
                    std::exp(-s_of[e * n_probes + p] * inter[e]);
    });

    std::vector<std::vector<McEstimate>> out(epsilon_sets.size());
    for (std::size_t e = 0; e < epsilon_sets.size(); ++e) {
        out[e].resize(n_probes);
        for (std::size_t p = 0; p < n_probes; ++p) {
            const McEstimate in = column_estimate(values, n, width, e * n_probes + p);
            const McEstimate far =
                column_estimate(far_values, far_n, width, e * n_probes + p);
            const double mean = in.mean * far.mean;
            const double se = std::sqrt(in.std_error * in.std_error * far.mean * far.mean +
                                        far.std_error * far.std_error * in.mean * in.mean);
            out[e][p] = {mean, se, n};
        }
    }
    return out;
}

McEstimate estimate_laplace(const NetworkConfig& config, AccessMode mode,
                            const LaplaceProbe& probe, const McSettings& settings) {
    std::vector<double> eps(config.tiers.size());
    for (std::size_t j = 0; j < eps.size(); ++j) eps[j] = config.tiers[j].fpc_factor;
    const std::vector<std::vector<double>> sets{eps};
    const LaplaceProbe probes[] = {probe};
    return estimate_laplace_grid(config, mode, sets, probes, settings)[0][0];
}

namespace {

std::vector<std::vector<McEstimate>> estimate_rate_grid_thinned(
    const NetworkConfig& config, AccessMode mode,
    std::span<const std::vector<double>> epsilon_sets, const McSettings& settings) {
    const auto assoc = analytic::assoc_probs(config, mode);
    const auto counts = analytic::ue_counts(config, assoc);
    const auto fields = make_fields(config, mode, assoc);
    const EpsTable eps = make_eps_table(config, epsilon_sets);
    const double region = settings.region_radius > 0.0
                              ? settings.region_radius
                              : default_region_radius(config);
    const std::size_t k = config.tiers.size();
    const std::optional<double> cap =
        settings.apply_power_cap ? config.ue_max_tx_power : std::nullopt;

    const long n = settings.num_drops;
    const std::size_t width = eps.n_sets * k;
    std::vector<double> values(static_cast<std::size_t>(n) * width);

    // Far-field compensation: the annulus (region, 4*region) contributes a
    // nearly deterministic extra interference (its per-drop variance is
    // orders below the in-region one), so its sampled mean is added to every
    // drop. This removes most of the truncation bias without touching the
    // spread of the estimator.
    const long far_n = std::max<long>(1000, n / 50);
    std::vector<double> far_values(static_cast<std::size_t>(far_n) * eps.n_sets);
    for_each_drop(far_n, settings.threads, [&](long d) {
        auto rng = drop_stream(settings.seed ^ 0xbb67ae8584caa73bULL,
                               static_cast<std::uint64_t>(d));
        add_annulus_interference(
            fields, eps, region * region, 16.0 * region * region, cap, rng,
            far_values.data() + static_cast<std::size_t>(d) * eps.n_sets);
    });
    std::vector<double> far_mean(eps.n_sets);
    for (std::size_t e = 0; e < eps.n_sets; ++e)
        far_mean[e] = column_estimate(far_values, far_n, eps.n_sets, e).mean;

    for_each_drop(n, settings.threads, [&](long d) {
        auto rng = drop_stream(settings.seed, static_cast<std::uint64_t>(d));
        // Typical link: distance Rayleigh(lambda_U), Exp(1) fade.
        const double dist =
            std::sqrt(rng.exponential() / (kPi * config.ue_intensity));
        const double fade = rng.exponential();
        std::vector<double> inter(far_mean);
        if (region > dist)
            add_annulus_interference(fields, eps, dist * dist, region * region,
                                     cap, rng, inter.data());

        double* row = values.data() + static_cast<std::size_t>(d) * width;
        const double ln_dist = std::log(dist);
        for (std::size_t e = 0; e < eps.n_sets; ++e) {
            for (std::size_t i = 0; i < k; ++i) {
                const auto& ti = config.tiers[i];
                double tx = ti.baseline_ue_power *
                            std::exp(eps.alpha_eps[e][i] * ln_dist);
                if (cap && tx > *cap) tx = *cap;
                const double received =
                    tx * fade * std::exp(-ti.path_loss_exp * ln_dist);
                const double sinr =
                    received / (inter[e] + config.noise_power);
                row[e * k + i] =
                    sinr > ti.sinr_threshold
                        ? std::log1p(sinr) * config.bandwidth / counts.per_bs[i]
                        : 0.0;
            }
        }
    });

    std::vector<std::vector<McEstimate>> out(eps.n_sets);
    for (std::size_t e = 0; e < eps.n_sets; ++e) {
        out[e].resize(k);
        for (std::size_t i = 0; i < k; ++i)
            out[e][i] = column_estimate(values, n, width, e * k + i);
    }
    return out;
}

// ---- OnePerBs realization ------------------------------------------------

// Uniform-grid nearest-neighbour index over a disk of points.
class DiskIndex {
public:
    DiskIndex(const std::vector<Point>& points, double region, double intensity)
        : points_(points), region_(region) {
        const double target_cell = 1.0 / std::sqrt(std::max(intensity, 1e-12));
        cells_ = std::max(1, std::min(256, static_cast<int>(2.0 * region / target_cell)));
        cell_ = 2.0 * region_ / cells_;
        buckets_.resize(static_cast<std::size_t>(cells_) * cells_);
        for (std::size_t i = 0; i < points_.size(); ++i)
            buckets_[bucket_of(points_[i].x, points_[i].y)].push_back(
                static_cast<int>(i));
    }

    // Index and distance of the nearest point to (x, y); -1 if empty.
    std::pair<int, double> nearest(double x, double y) const {
        if (points_.empty()) return {-1, 0.0};
        const int cx = clamp_cell((x + region_) / cell_);
        const int cy = clamp_cell((y + region_) / cell_);
        int best = -1;
        double best2 = std::numeric_limits<double>::infinity();
        for (int ring = 0; ring < cells_; ++ring) {
            if (best >= 0) {
                const double safe = (ring - 1) * cell_;
                if (safe > 0.0 && safe * safe >= best2) break;
            }
            bool visited = false;
            for (int dy = -ring; dy <= ring; ++dy) {
                for (int dx = -ring; dx <= ring; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    const int gx = cx + dx, gy = cy + dy;
                    if (gx < 0 || gy < 0 || gx >= cells_ || gy >= cells_) continue;
                    visited = true;
                    for (int idx : buckets_[static_cast<std::size_t>(gy) * cells_ + gx]) {
                        const double ddx = points_[idx].x - x;
                        const double ddy = points_[idx].y - y;
                        const double d2 = ddx * ddx + ddy * ddy;
                        if (d2 < best2) {
                            best2 = d2;
                            best = idx;
                        }
                    }
                }
            }
            if (!visited && best >= 0) break;
        }
        return {best, std::sqrt(best2)};
    }

private:
    int clamp_cell(double v) const {
        return std::clamp(static_cast<int>(v), 0, cells_ - 1);
    }
    std::size_t bucket_of(double x, double y) const {
        return static_cast<std::size_t>(clamp_cell((y + region_) / cell_)) * cells_ +
               clamp_cell((x + region_) / cell_);
    }
    const std::vector<Point>& points_;
    double region_;
    int cells_ = 1;
    double cell_ = 1.0;
    std::vector<std::vector<int>> buckets_;
};

// One transmitting UE chosen per occupied BS; realized serving distances.
struct RealizedDrop {
    // typical link (UE served by the origin BS); valid if has_typical
    bool has_typical = false;
    double typical_distance = 0.0;
    // interferers: serving tier, serving distance, distance to origin
    std::vector<std::array<double, 3>> interferers;
};

RealizedDrop realize_one_per_bs(const NetworkConfig& config, AccessMode mode,
                                std::size_t origin_tier, double region,
                                Xoshiro256pp& rng) {
    const std::size_t k = config.tiers.size();
    std::vector<std::vector<Point>> bs(k);
    for (std::size_t j = 0; j < k; ++j)
        bs[j] = sample_ppp(config.tiers[j].bs_intensity, region, rng);
    bs[origin_tier].push_back({0.0, 0.0});  // Slivnyak: the typical receiver
    const int origin_idx = static_cast<int>(bs[origin_tier].size()) - 1;

    std::vector<DiskIndex> index;
    index.reserve(k);
    for (std::size_t j = 0; j < k; ++j)
        index.emplace_back(bs[j], region, config.tiers[j].bs_intensity);

    const std::vector<Point> ues = sample_ppp(config.ue_intensity, region, rng);

    // winner BS (tier, idx) -> chosen UE via reservoir sampling
    struct Chosen {
        int count = 0;
        double serving_distance = 0.0;
        double ue_x = 0.0, ue_y = 0.0;
    };
    std::vector<std::vector<Chosen>> chosen(k);
    for (std::size_t j = 0; j < k; ++j) chosen[j].resize(bs[j].size());

    for (const auto& ue : ues) {
        std::size_t best_tier = 0;
        int best_idx = -1;
        double best_metric = -std::numeric_limits<double>::infinity();
        double best_d = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const auto [idx, dist] = index[j].nearest(ue.x, ue.y);
            if (idx < 0) continue;
            double metric = 0.0;
            switch (mode) {
                case AccessMode::Duda: metric = -dist; break;
                case AccessMode::CudaMeanFading:
                    metric = std::log(config.tiers[j].bs_tx_power) -
                             config.tiers[j].path_loss_exp * std::log(dist);
                    break;
                case AccessMode::CudaFading:
                    metric = std::log(config.tiers[j].bs_tx_power) +
                             std::log(rng.exponential()) -
                             config.tiers[j].path_loss_exp * std::log(dist);
                    break;
            }
            if (best_idx < 0 || metric > best_metric) {
                best_tier = j;
                best_idx = idx;
                best_metric = metric;
                best_d = dist;
            }
        }
        if (best_idx < 0) continue;
        Chosen& c = chosen[best_tier][static_cast<std::size_t>(best_idx)];
        ++c.count;
        // keep each associated UE with probability 1/count: uniform choice
        if (c.count == 1 || rng.uniform() * c.count < 1.0) {
            c.serving_distance = best_d;
            c.ue_x = ue.x;
            c.ue_y = ue.y;
        }
    }

    RealizedDrop drop;
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t b = 0; b < chosen[j].size(); ++b) {
            const Chosen& c = chosen[j][b];
            if (c.count == 0) continue;
            const bool is_origin =
                j == origin_tier && static_cast<int>(b) == origin_idx;
            if (is_origin) {
                drop.has_typical = true;
                drop.typical_distance = c.serving_distance;
            } else {
                drop.interferers.push_back(
                    {static_cast<double>(j), c.serving_distance,
                     std::hypot(c.ue_x, c.ue_y)});
            }
        }
    }
    return drop;
}

std::vector<std::vector<McEstimate>> estimate_rate_grid_one_per_bs(
    const NetworkConfig& config, AccessMode mode,
    std::span<const std::vector<double>> epsilon_sets, const McSettings& settings) {
    const auto assoc = analytic::assoc_probs(config, mode);
    const auto counts = analytic::ue_counts(config, assoc);
    const EpsTable eps = make_eps_table(config, epsilon_sets);
    const double region = settings.region_radius > 0.0
                              ? settings.region_radius
                              : default_region_radius(config);
    const std::size_t k = config.tiers.size();
    const std::optional<double> cap =
        settings.apply_power_cap ? config.ue_max_tx_power : std::nullopt;

    std::vector<std::vector<McEstimate>> out(eps.n_sets,
                                             std::vector<McEstimate>(k));
    const long n = settings.num_drops;
    for (std::size_t tier = 0; tier < k; ++tier) {
        const std::size_t width = eps.n_sets;
        std::vector<double> values(static_cast<std::size_t>(n) * width, 0.0);
        for_each_drop(n, settings.threads, [&](long d) {
            auto rng = drop_stream(settings.seed + tier, static_cast<std::uint64_t>(d));
            const RealizedDrop drop =
                realize_one_per_bs(config, mode, tier, region, rng);
            double* row = values.data() + static_cast<std::size_t>(d) * width;
            if (!drop.has_typical) return;  // silent BS: zero rate this drop
            const double fade = rng.exponential();
            std::vector<double> inter(eps.n_sets, 0.0);
            for (const auto& v : drop.interferers) {
                const std::size_t j = static_cast<std::size_t>(v[0]);
                const double ln_serve = std::log(v[1]);
                const double attn =
                    std::exp(-config.tiers[j].path_loss_exp * std::log(v[2]));
                const double h = rng.exponential();
                for (std::size_t e = 0; e < eps.n_sets; ++e) {
                    double tx = config.tiers[j].baseline_ue_power *
                                std::exp(eps.alpha_eps[e][j] * ln_serve);
                    if (cap && tx > *cap) tx = *cap;
                    inter[e] += tx * h * attn;
                }
            }
            const auto& ti = config.tiers[tier];
            const double ln_dist = std::log(drop.typical_distance);
            for (std::size_t e = 0; e < eps.n_sets; ++e) {
                double tx = ti.baseline_ue_power *
                            std::exp(eps.alpha_eps[e][tier] * ln_dist);
                if (cap && tx > *cap) tx = *cap;
                const double sinr = tx * fade *
                                    std::exp(-ti.path_loss_exp * ln_dist) /
                                    (inter[e] + config.noise_power);
                row[e] = sinr > ti.sinr_threshold
                             ? std::log1p(sinr) * config.bandwidth /
                                   counts.per_bs[tier]
                             : 0.0;
            }
        });
        for (std::size_t e = 0; e < eps.n_sets; ++e)
            out[e][tier] = column_estimate(values, n, width, e);
    }
    return out;
}

}  // namespace

std::vector<std::vector<McEstimate>> estimate_rate_grid(
    const NetworkConfig& config, AccessMode mode,
    std::span<const std::vector<double>> epsilon_sets, const McSettings& settings) {
    if (epsilon_sets.empty())
        throw std::invalid_argument("estimate_rate_grid: no epsilon sets");
    if (settings.num_drops < 1)
        throw std::invalid_argument("estimate_rate_grid: num_drops must be >= 1");
    if (settings.interferer_mode == InterfererMode::OnePerBs)
        return estimate_rate_grid_one_per_bs(config, mode, epsilon_sets, settings);
    return estimate_rate_grid_thinned(config, mode, epsilon_sets, settings);
}

DoublingCheck laplace_doubling_check(const NetworkConfig& config, AccessMode mode,
                                     const LaplaceProbe& probe,
                                     const McSettings& settings) {
    const auto assoc = analytic::assoc_probs(config, mode);
    const auto fields = make_fields(config, mode, assoc);
    std::vector<double> eps(config.tiers.size());
    for (std::size_t j = 0; j < eps.size(); ++j) eps[j] = config.tiers[j].fpc_factor;
    const std::vector<std::vector<double>> sets{eps};
    const EpsTable table = make_eps_table(config, sets);
    const double region = settings.region_radius > 0.0
                              ? settings.region_radius
                              : default_region_radius(config);
    const double s = laplace_probe_s(config, probe);
    const std::optional<double> cap =
        settings.apply_power_cap ? config.ue_max_tx_power : std::nullopt;

    const long n = settings.num_drops;
    std::vector<double> values(static_cast<std::size_t>(n) * 2);
    for_each_drop(n, settings.threads, [&](long d) {
        auto rng = drop_stream(settings.seed, static_cast<std::uint64_t>(d));
        double inner = 0.0, outer = 0.0;
        add_annulus_interference(fields, table, probe.r * probe.r, region * region,
                                 cap, rng, &inner);
        add_annulus_interference(fields, table, region * region,
                                 4.0 * region * region, cap, rng, &outer);
        double* row = values.data() + static_cast<std::size_t>(d) * 2;
        row[0] = std::exp(-s * inner);
        row[1] = std::exp(-s * (inner + outer));
    });
    const McEstimate base = column_estimate(values, n, 2, 0);
    const McEstimate doubled = column_estimate(values, n, 2, 1);
    return {base, doubled.mean - base.mean};
}

DoublingCheck rate_doubling_check(const NetworkConfig& config, AccessMode mode,
                                  std::size_t tier, const McSettings& settings) {
    const auto assoc = analytic::assoc_probs(config, mode);
    const auto counts = analytic::ue_counts(config, assoc);
    const auto fields = make_fields(config, mode, assoc);
    std::vector<double> eps(config.tiers.size());
    for (std::size_t j = 0; j < eps.size(); ++j) eps[j] = config.tiers[j].fpc_factor;
    const std::vector<std::vector<double>> sets{eps};
    const EpsTable table = make_eps_table(config, sets);
    const double region = settings.region_radius > 0.0
                              ? settings.region_radius
                              : default_region_radius(config);
    const auto& ti = config.tiers[tier];
    const std::optional<double> cap =
        settings.apply_power_cap ? config.ue_max_tx_power : std::nullopt;

    const long n = settings.num_drops;
    std::vector<double> values(static_cast<std::size_t>(n) * 2);
    for_each_drop(n, settings.threads, [&](long d) {
        auto rng = drop_stream(settings.seed, static_cast<std::uint64_t>(d));
        const double dist =
            std::sqrt(rng.exponential() / (kPi * config.ue_intensity));
        const double fade = rng.exponential();
        double inner = 0.0, outer = 0.0;
        if (region > dist)
            add_annulus_interference(fields, table, dist * dist, region * region,
                                     cap, rng, &inner);
        add_annulus_interference(fields, table, region * region,
                                 4.0 * region * region, cap, rng, &outer);
        const double tx = fpc_power(ti.baseline_ue_power, ti.path_loss_exp,
                                    ti.fpc_factor, dist, cap);
        const double received = tx * fade * std::pow(dist, -ti.path_loss_exp);
        double* row = values.data() + static_cast<std::size_t>(d) * 2;
        for (int which : {0, 1}) {
            const double interference = which == 0 ? inner : inner + outer;
            const double sinr = received / (interference + config.noise_power);
            row[which] = sinr > ti.sinr_threshold
                             ? std::log1p(sinr) * config.bandwidth /
                                   counts.per_bs[tier]
                             : 0.0;
        }
    });
    const McEstimate base = column_estimate(values, n, 2, 0);
    const McEstimate doubled = column_estimate(values, n, 2, 1);
    return {base, doubled.mean - base.mean};
}

McEstimate estimate_metric(const NetworkConfig& config, McMetric metric,
                           std::size_t tier, AccessMode mode,
                           const McSettings& settings) {
    if (tier >= config.tiers.size())
        throw std::out_of_range("estimate_metric: tier index");
    if (settings.num_drops < 1)
        throw std::invalid_argument("estimate_metric: num_drops must be >= 1");
    switch (metric) {
        case McMetric::AssocProb:
            return estimate_assoc_prob(config, tier, mode, settings);
        case McMetric::MeanPower:
            return estimate_mean_power(config, tier, mode, settings);
        case McMetric::Rate:
        case McMetric::Se: {
            std::vector<double> eps(config.tiers.size());
            for (std::size_t j = 0; j < eps.size(); ++j)
                eps[j] = config.tiers[j].fpc_factor;
            const std::vector<std::vector<double>> sets{eps};
            McEstimate est = estimate_rate_grid(config, mode, sets, settings)[0][tier];
            if (metric == McMetric::Se) {
                const double scale = analytic::assoc_probs(config, mode)[tier] *
                                     config.ue_intensity / config.bandwidth;
                est.mean *= scale;
                est.std_error *= scale;
            }
            return est;
        }
        case McMetric::Ee: {
            McSettings power_settings = settings;
            power_settings.seed = settings.seed ^ 0xd1b54a32d192ed03ULL;
            const McEstimate rate =
                estimate_metric(config, McMetric::Rate, tier, mode, settings);
            const McEstimate power =
                estimate_metric(config, McMetric::MeanPower, tier, mode, power_settings);
            const double ee = rate.mean / power.mean;
            const double rel = std::sqrt(
                (rate.std_error / rate.mean) * (rate.std_error / rate.mean) +
                (power.std_error / power.mean) * (power.std_error / power.mean));
            return {ee, std::abs(ee) * rel, rate.n};
        }
    }
    throw std::logic_error("estimate_metric: unknown metric");
}

}  // namespace hetnet::mc
