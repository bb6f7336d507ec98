#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hetnet/config_io.hpp"
#include "hetnet/quadrature.hpp"
#include "hetnet/rng.hpp"
#include "hetnet/units.hpp"

using namespace hetnet;

namespace {

const char* kPicoText = R"(# two-tier macro + pico measurement scenario
ue_intensity = 0.2
bandwidth_mhz = 20
interference_limited = true
access_mode = duda
ue_max_tx_power_dbm = 23

[tier]
bs_intensity = 0.01
bs_power_dbm = 43
alpha = 4.3
epsilon = 0.5
baseline_ue_power_dbm = -10
sinr_threshold_db = -10

[tier]
bs_intensity = 0.04
bs_power_dbm = 21
alpha = 3.8
epsilon = 0.5
baseline_ue_power_dbm = -10
sinr_threshold_db = -10
)";

}  // namespace

TEST_CASE("unit conversions") {
    CHECK(dbm_to_watt(43.0) == doctest::Approx(19.9526231497).epsilon(1e-10));
    CHECK(db_to_linear(-10.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(watt_to_dbm(dbm_to_watt(17.0)) == doctest::Approx(17.0).epsilon(1e-12));
}

TEST_CASE("pico scenario file parses to Table II values") {
    const NetworkConfig c = load_config(kPicoText);
    REQUIRE(c.tiers.size() == 2);
    CHECK(c.ue_intensity == 0.2);
    CHECK(c.bandwidth == 20e6);
    CHECK(c.noise_power == 0.0);
    CHECK(c.access_mode == AccessMode::Duda);
    CHECK(c.tiers[0].bs_intensity == 0.01);
    CHECK(c.tiers[1].bs_intensity == 0.04);
    CHECK(c.tiers[0].path_loss_exp == 4.3);
    CHECK(c.tiers[1].path_loss_exp == 3.8);
    CHECK(c.tiers[0].bs_tx_power == doctest::Approx(19.9526231497).epsilon(1e-10));
    CHECK(c.tiers[0].sinr_threshold == doctest::Approx(0.1).epsilon(1e-12));
    REQUIRE(c.ue_max_tx_power.has_value());
    CHECK(*c.ue_max_tx_power == doctest::Approx(dbm_to_watt(23.0)));
}

TEST_CASE("builtin scenarios match the hand-written file") {
    const NetworkConfig file = load_config(kPicoText);
    const NetworkConfig builtin = builtin_scenario("table2_pico");
    CHECK(builtin.tiers[0].bs_tx_power == file.tiers[0].bs_tx_power);
    CHECK(builtin.tiers[1].bs_tx_power == file.tiers[1].bs_tx_power);
    CHECK(builtin.tiers[1].path_loss_exp == file.tiers[1].path_loss_exp);
    const NetworkConfig femto = builtin_scenario("table2_femto");
    CHECK(femto.tiers[1].bs_intensity == 0.08);
    CHECK(femto.tiers[1].path_loss_exp == 3.5);
    CHECK_THROWS_AS(builtin_scenario("table3"), ConfigError);
}

TEST_CASE("unknown keys and malformed lines carry line numbers") {
    try {
        load_config("ue_intensity = 0.2\nbogus_key = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
    CHECK_THROWS_AS(load_config("ue_intensity 0.2\n"), ConfigError);
    CHECK_THROWS_AS(load_config("ue_intensity = abc\n"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("invariant violations name the offending field") {
    std::string text(kPicoText);
    // alpha = 2 violates the path-loss requirement
    const auto pos = text.find("alpha = 4.3");
    text.replace(pos, 11, "alpha = 2.0");
    try {
        load_config(text);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("alpha") != std::string::npos);
    }
}

TEST_CASE("missing required keys are reported") {
    CHECK_THROWS_AS(load_config("ue_intensity = 0.2\n"), ConfigError);
    // tier missing epsilon
    CHECK_THROWS_AS(load_config("ue_intensity = 0.2\nbandwidth_mhz = 20\n"
                                "interference_limited = true\naccess_mode = duda\n"
                                "[tier]\nbs_intensity = 0.01\nbs_power_dbm = 43\n"
                                "alpha = 4\nbaseline_ue_power_dbm = -10\n"
                                "sinr_threshold_db = -10\n"),
                    ConfigError);
}

TEST_CASE("save/load round-trip is bit-exact in canonical units") {
    NetworkConfig c = load_config(kPicoText);
    c.tiers[0].fpc_factor = 0.7123456789012345;  // not representable in short form
    c.noise_power = 3.981071705534972e-15;
    const NetworkConfig back = load_config(save_config(c));
    CHECK(back.ue_intensity == c.ue_intensity);
    CHECK(back.bandwidth == c.bandwidth);
    CHECK(back.noise_power == c.noise_power);
    CHECK(back.access_mode == c.access_mode);
    REQUIRE(back.tiers.size() == c.tiers.size());
    for (std::size_t i = 0; i < c.tiers.size(); ++i) {
        CHECK(back.tiers[i].bs_intensity == c.tiers[i].bs_intensity);
        CHECK(back.tiers[i].bs_tx_power == c.tiers[i].bs_tx_power);
        CHECK(back.tiers[i].path_loss_exp == c.tiers[i].path_loss_exp);
        CHECK(back.tiers[i].fpc_factor == c.tiers[i].fpc_factor);
        CHECK(back.tiers[i].baseline_ue_power == c.tiers[i].baseline_ue_power);
        CHECK(back.tiers[i].sinr_threshold == c.tiers[i].sinr_threshold);
    }
    REQUIRE(back.ue_max_tx_power.has_value());
    CHECK(*back.ue_max_tx_power == *c.ue_max_tx_power);
}

TEST_CASE("serving distance pdf: vanishes at 0, normalizes, has the DUDA mean") {
    const NetworkConfig femto = builtin_scenario("table2_femto");
    CHECK(serving_distance_pdf(femto, 0, AccessMode::Duda, 0.0) == 0.0);

    const QuadratureSpec tight{1e-10, 1e-14, 2000};
    for (auto mode : {AccessMode::Duda, AccessMode::CudaMeanFading}) {
        for (std::size_t tier : {0u, 1u}) {
            auto total = integrate_semi_infinite(
                [&](double r) { return serving_distance_pdf(femto, tier, mode, r); },
                tight);
            CHECK(total.value == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    // DUDA mean nearest-BS distance = 1/(2*sqrt(lambda_H)), checked against
    // 1e6 droppings of the superposed process.
    const double lambda_h = femto.total_bs_intensity();  // 0.09
    const double analytic_mean = 1.0 / (2.0 * std::sqrt(lambda_h));
    const double region = 5.0 / std::sqrt(lambda_h);
    const long drops = 1'000'000;
    double sum = 0.0, sum_sq = 0.0;
    for (long d = 0; d < drops; ++d) {
        auto rng = drop_stream(20240117, static_cast<std::uint64_t>(d));
        double best2 = 1e300;
        // distances only: squared radii of disk-uniform points are uniform
        for (const auto& t : femto.tiers) {
            const std::uint64_t n =
                rng.poisson(t.bs_intensity * std::numbers::pi * region * region);
            for (std::uint64_t k = 0; k < n; ++k) {
                const double d2 = rng.uniform() * region * region;
                if (d2 < best2) best2 = d2;
            }
        }
        const double dist = std::sqrt(best2);
        sum += dist;
        sum_sq += dist * dist;
    }
    const double mc_mean = sum / drops;
    const double var = (sum_sq - drops * mc_mean * mc_mean) / (drops - 1);
    const double se = std::sqrt(var / drops);
    CHECK(std::abs(mc_mean - analytic_mean) < 3.0 * se);
}
