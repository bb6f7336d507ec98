#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hetnet/quadrature.hpp"

using namespace hetnet;

namespace {

// Brute-force trapezoid oracle on [0, hi], independent of the adaptive code.
double trapezoid(double (*f)(double), double hi, long n) {
    const double h = hi / static_cast<double>(n);
    double sum = 0.5 * (f(0.0) + f(hi));
    for (long i = 1; i < n; ++i) sum += f(h * static_cast<double>(i));
    return sum * h;
}

double bump(double x) { return x * std::exp(-x * x) * std::log1p(x); }

}  // namespace

TEST_CASE("finite integral of exp(-x)") {
    auto r = integrate([](double x) { return std::exp(-x); }, 0.0, 50.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.err_est < 1e-7);
}

TEST_CASE("semi-infinite exp(-x) integrates to 1") {
    auto r = integrate_semi_infinite([](double x) { return std::exp(-x); });
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Rayleigh density normalizes for lambda = 0.09") {
    const double lambda = 0.09;
    auto density = [lambda](double x) {
        return 2.0 * std::numbers::pi * lambda * x *
               std::exp(-lambda * std::numbers::pi * x * x);
    };
    auto r = integrate_semi_infinite(density, {1e-10, 1e-14, 2000});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));

    // Same weight through the dedicated substitution: expectation of 1.
    auto e = rayleigh_expectation([](double) { return 1.0; }, lambda);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("x exp(-x^2) log(1+x) against a 1e7-point trapezoid oracle") {
    const double oracle = trapezoid(bump, 40.0, 10'000'000);
    auto r = integrate_semi_infinite([](double x) { return bump(x); });
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("subdivision budget exhaustion reports the best estimate") {
    // Highly oscillatory integrand with a starved budget.
    QuadratureSpec spec{1e-14, 0.0, 3};
    bool threw = false;
    try {
        integrate([](double x) { return std::sin(1000.0 * x * x); }, 0.0, 10.0, spec);
    } catch (const QuadratureError& e) {
        threw = true;
        CHECK(std::isfinite(e.best_estimate()));
        CHECK(e.err_est() > 0.0);
    }
    CHECK(threw);
}

TEST_CASE("invalid spec is rejected") {
    QuadratureSpec bad{-1.0, 0.0, 10};
    CHECK_THROWS_AS(integrate([](double x) { return x; }, 0.0, 1.0, bad),
                    std::invalid_argument);
}

TEST_CASE("rayleigh_expectation reproduces moments of the Rayleigh law") {
    // E[R^k] = (pi*lambda)^(-k/2) * Gamma(k/2 + 1)
    const double lambda = 0.05;
    for (double k : {1.0, 2.0, 3.5}) {
        auto r = rayleigh_expectation(
            [k](double x) { return std::pow(x, k); }, lambda, {1e-10, 1e-14, 2000});
        const double expected = std::pow(std::numbers::pi * lambda, -0.5 * k) *
                                std::tgamma(0.5 * k + 1.0);
        CHECK(r.value == doctest::Approx(expected).epsilon(1e-8));
    }
}
