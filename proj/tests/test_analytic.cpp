#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hetnet/analytic.hpp"
#include "hetnet/config_io.hpp"
#include "hetnet/quadrature.hpp"
#include "hetnet/special_functions.hpp"
#include "hetnet/units.hpp"

using namespace hetnet;
namespace an = hetnet::analytic;

namespace {

NetworkConfig identical_two_tier() {
    NetworkConfig c = builtin_scenario("table2_pico");
    c.tiers[1] = c.tiers[0];
    return c;
}

NetworkConfig single_tier() {
    NetworkConfig c = builtin_scenario("table2_pico");
    c.tiers.resize(1);
    return c;
}

NetworkConfig three_tier() {
    NetworkConfig c = builtin_scenario("table2_pico");
    TierParams femto = c.tiers[1];
    femto.bs_intensity = 0.08;
    femto.bs_tx_power = dbm_to_watt(17.0);
    femto.path_loss_exp = 3.5;
    c.tiers.push_back(femto);
    return c;
}

}  // namespace

TEST_CASE("DUDA association is the intensity share") {
    const auto pico = builtin_scenario("table2_pico");
    CHECK(an::assoc_prob_duda(pico, 0) == doctest::Approx(0.20).epsilon(1e-12));
    CHECK(an::assoc_prob_duda(pico, 1) == doctest::Approx(0.80).epsilon(1e-12));
    const auto femto = builtin_scenario("table2_femto");
    CHECK(an::assoc_prob_duda(femto, 0) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(an::assoc_prob_duda(femto, 1) == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
    CHECK(an::assoc_prob_duda(single_tier(), 0) == 1.0);
}

TEST_CASE("CUDA mean-power association on the measurement scenarios") {
    const auto pico = builtin_scenario("table2_pico");
    const double a_macro = an::assoc_prob_cuda_mean(pico, 0);
    const double a_pico = an::assoc_prob_cuda_mean(pico, 1);
    // cross-implementation pins (independent quadrature of the same integral)
    CHECK(a_macro == doctest::Approx(0.6932065976).epsilon(1e-6));
    CHECK(a_pico == doctest::Approx(0.3067934024).epsilon(1e-6));
    CHECK(a_macro + a_pico == doctest::Approx(1.0).epsilon(1e-8));

    const auto femto = builtin_scenario("table2_femto");
    CHECK(an::assoc_prob_cuda_mean(femto, 0) ==
          doctest::Approx(0.6350686213).epsilon(1e-6));
    CHECK(an::assoc_prob_cuda_mean(femto, 1) ==
          doctest::Approx(0.3649313787).epsilon(1e-6));
}

TEST_CASE("CUDA mean-power association: symmetry and DUDA reduction") {
    CHECK(an::assoc_prob_cuda_mean(identical_two_tier(), 0) ==
          doctest::Approx(0.5).epsilon(1e-9));

    // equal powers and exponents but distinct intensities: nearest-BS rule
    NetworkConfig c = identical_two_tier();
    c.tiers[0].bs_intensity = 0.013;
    c.tiers[1].bs_intensity = 0.037;
    for (std::size_t i : {0u, 1u})
        CHECK(an::assoc_prob_cuda_mean(c, i) ==
              doctest::Approx(an::assoc_prob_duda(c, i)).epsilon(1e-9));
}

TEST_CASE("CUDA mean-power association sums to 1 for three tiers") {
    const auto c = three_tier();
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) sum += an::assoc_prob_cuda_mean(c, i);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("CUDA faded association on the measurement scenarios") {
    const auto pico = builtin_scenario("table2_pico");
    CHECK(an::assoc_prob_cuda_fading(pico, 0) ==
          doctest::Approx(0.6698545187).epsilon(1e-6));
    CHECK(an::assoc_prob_cuda_fading(pico, 1) ==
          doctest::Approx(0.3301454813).epsilon(1e-6));
    const auto femto = builtin_scenario("table2_femto");
    CHECK(an::assoc_prob_cuda_fading(femto, 0) ==
          doctest::Approx(0.6184780740).epsilon(1e-6));

    CHECK(an::assoc_prob_cuda_fading(identical_two_tier(), 0) ==
          doctest::Approx(0.5).epsilon(1e-8));
    CHECK(an::assoc_prob_cuda_fading(single_tier(), 0) == 1.0);
}

TEST_CASE("ue_counts arithmetic and Table I load ratios") {
    const auto pico = builtin_scenario("table2_pico");
    // DUDA: equal per-BS load by construction
    auto duda = an::ue_counts(pico, {0.2, 0.8});
    CHECK(duda.per_tier[0] == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(duda.per_tier[1] == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(duda.per_bs[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(duda.per_bs[1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(duda.load_ratio(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

    // the published CUDA column: 0.69/0.31 -> 8.9:1, 0.65/0.35 -> 14.9:1
    auto cuda_pico = an::ue_counts(pico, {0.69, 0.31});
    CHECK(cuda_pico.load_ratio(0, 1) == doctest::Approx(8.903).epsilon(1e-3));
    const auto femto = builtin_scenario("table2_femto");
    auto cuda_femto = an::ue_counts(femto, {0.65, 0.35});
    CHECK(cuda_femto.load_ratio(0, 1) == doctest::Approx(14.857).epsilon(1e-3));

    CHECK_THROWS_AS(an::ue_counts(pico, {0.9, 0.3}), std::invalid_argument);
}

TEST_CASE("laplace transform: anchors and monotonicity") {
    const auto pico = builtin_scenario("table2_pico");
    const auto assoc = an::assoc_probs(pico, AccessMode::Duda);

    CHECK(an::laplace_interference({pico, 0, 1.0, 0.0}, AccessMode::Duda, assoc) ==
          1.0);

    double prev = 1.0;
    for (double s : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        const double v =
            an::laplace_interference({pico, 0, 1.0, s}, AccessMode::Duda, assoc);
        CHECK(v > 0.0);
        CHECK(v <= prev);
        prev = v;
    }

    // nonincreasing in the UE intensity
    NetworkConfig denser = pico;
    denser.ue_intensity = 0.4;
    const double base =
        an::laplace_interference({pico, 0, 1.5, 0.3}, AccessMode::Duda, assoc);
    const double dense =
        an::laplace_interference({denser, 0, 1.5, 0.3}, AccessMode::Duda, assoc);
    CHECK(dense <= base);
}

TEST_CASE("hypergeometric closed form equals the exclusion-zone integral") {
    // Q*r^(2-a)/(a-2) * 2F1(1, 1-2/a; 2-2/a; -Q/r^a)  ==
    // Int_r^inf (1 - 1/(1 + Q x^-a)) x dx, evaluated directly: adaptive on
    // [r, X] plus the leading tail term, with X chosen so the bracket
    // Q*X^(2-a)/(a-2) * [1/(1+Q X^-a), 1] around the remainder is 1e-9 wide.
    const QuadratureSpec tight{1e-10, 1e-16, 4000};
    for (double alpha : {3.5, 3.8, 4.3}) {
        for (double q : {0.01, 1.0, 50.0}) {
            for (double r : {0.5, 1.0, 3.0}) {
                const double closed =
                    q * std::pow(r, 2.0 - alpha) / (alpha - 2.0) *
                    hyp2f1_interference(alpha, -q / std::pow(r, alpha));
                const double cut = std::pow(q * 1e9, 1.0 / alpha) + 10.0 * r;
                auto finite = integrate(
                    [&](double x) {
                        const double c = q * std::pow(x, -alpha);
                        return (1.0 - 1.0 / (1.0 + c)) * x;
                    },
                    r, cut, tight);
                const double tail =
                    q * std::pow(cut, 2.0 - alpha) / (alpha - 2.0);
                CHECK(closed ==
                      doctest::Approx(finite.value + tail).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("rate/SE identity across modes") {
    const auto pico = builtin_scenario("table2_pico");
    for (auto mode : {AccessMode::Duda, AccessMode::CudaMeanFading}) {
        const auto assoc = an::assoc_probs(pico, mode);
        for (std::size_t i : {0u, 1u}) {
            const double rate = an::mean_rate(pico, i, mode, assoc);
            const double se = an::spectrum_efficiency(pico, i, mode, assoc);
            const double via_rate = assoc[i] * pico.ue_intensity * rate / pico.bandwidth;
            CHECK(se == doctest::Approx(via_rate).epsilon(1e-6));
        }
    }
}

TEST_CASE("rate vanishes as the threshold explodes") {
    NetworkConfig c = builtin_scenario("table2_pico");
    const double base = an::mean_rate(c, 1, AccessMode::Duda);
    for (auto& t : c.tiers) t.sinr_threshold = 1e6;
    const double choked = an::mean_rate(c, 1, AccessMode::Duda);
    CHECK(choked < 1e-4 * base);
}

TEST_CASE("mean UE power: closed form against the defining integral") {
    // E[P] = Int P_b * r^(a*e) * f_R(r) dr with f_R Rayleigh(lambda_law)
    for (double alpha : {3.5, 4.3}) {
        for (double eps : {0.0, 0.5, 1.0}) {
            for (double lambda : {0.01, 0.09}) {
                NetworkConfig c = builtin_scenario("table2_pico");
                c.tiers[0].path_loss_exp = alpha;
                c.tiers[0].fpc_factor = eps;
                c.tiers[0].bs_intensity = lambda;
                c.tiers[1].bs_intensity = 1e-12;  // make tier 0 the whole process
                // with tier 1 negligible, lambda_H ~= lambda: DUDA and CUDA agree
                const double closed = an::mean_ue_power(c, 0, AccessMode::CudaMeanFading);
                const double base = c.tiers[0].baseline_ue_power;
                auto direct = rayleigh_expectation(
                    [&](double r) { return base * std::pow(r, alpha * eps); },
                    lambda, {1e-12, 1e-16, 4000});
                CHECK(closed == doctest::Approx(direct.value).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("mean UE power: special cases") {
    NetworkConfig c = builtin_scenario("table2_pico");
    c.tiers[0].fpc_factor = 0.0;
    CHECK(an::mean_ue_power(c, 0, AccessMode::Duda) ==
          doctest::Approx(c.tiers[0].baseline_ue_power).epsilon(1e-12));

    // alpha*eps = 2 -> E[P] = P_b / (lambda*pi)
    c.tiers[0].fpc_factor = 2.0 / c.tiers[0].path_loss_exp;
    const double expected =
        c.tiers[0].baseline_ue_power / (c.tiers[0].bs_intensity * std::numbers::pi);
    CHECK(an::mean_ue_power(c, 0, AccessMode::CudaMeanFading) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("DUDA serves both tiers at closer rates than CUDA") {
    const auto pico = builtin_scenario("table2_pico");
    auto ratio_of = [&](AccessMode mode) {
        const auto assoc = an::assoc_probs(pico, mode);
        const double macro = an::mean_rate(pico, 0, mode, assoc);
        const double small = an::mean_rate(pico, 1, mode, assoc);
        const double r = macro / small;
        return r > 1.0 ? r : 1.0 / r;  // distance from parity
    };
    CHECK(ratio_of(AccessMode::Duda) < ratio_of(AccessMode::CudaMeanFading));
}

TEST_CASE("performance report: internal consistency") {
    const auto pico = builtin_scenario("table2_pico");
    const auto report = an::performance_report(pico, AccessMode::CudaMeanFading);
    REQUIRE(report.per_tier.size() == 2);
    double assoc_sum = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& row = report.per_tier[i];
        assoc_sum += row.assoc_prob;
        CHECK(row.ue_per_tier == doctest::Approx(row.assoc_prob * pico.ue_intensity)
                                     .epsilon(1e-12));
        CHECK(row.ue_per_bs * pico.tiers[i].bs_intensity ==
              doctest::Approx(row.ue_per_tier).epsilon(1e-12));
        CHECK(row.mean_rate >= 0.0);
        CHECK(row.se >= 0.0);
        CHECK(row.mean_tx_power > 0.0);
        CHECK(row.ee >= 0.0);
    }
    CHECK(assoc_sum == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(report.load_ratio_at(0, 1) ==
          doctest::Approx(report.per_tier[0].ue_per_bs / report.per_tier[1].ue_per_bs)
              .epsilon(1e-12));
    CHECK(report.total_se ==
          doctest::Approx(report.per_tier[0].se + report.per_tier[1].se)
              .epsilon(1e-9));
}

TEST_CASE("single tier totals reduce to the per-tier values") {
    const auto c = single_tier();
    const double rate = an::mean_rate(c, 0, AccessMode::Duda);
    CHECK(an::total_rate(c, AccessMode::Duda) ==
          doctest::Approx(c.ue_intensity * rate).epsilon(1e-9));
    CHECK(an::total_energy_efficiency(c, AccessMode::Duda) ==
          doctest::Approx(an::energy_efficiency(c, 0, AccessMode::Duda))
              .epsilon(1e-9));
}
