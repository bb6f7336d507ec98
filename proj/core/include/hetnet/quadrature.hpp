#pragma once

#include <functional>
#include <stdexcept>
#include <string>

// Adaptive Gauss-Kronrod (G7-K15) quadrature with QUADPACK-style error
// estimation. Semi-infinite integrals are folded onto (0, 1) with the
// x = t/(1-t) map; integrands with a Rayleigh weight are better served by
// rayleigh_expectation, which substitutes v = exp(-pi*lambda*x^2) so the
// weight becomes uniform.

namespace hetnet {

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double err_est = 0.0;
};

/// Thrown when the subdivision budget is exhausted before the tolerance is
/// met. Carries the best estimate so callers can still inspect it.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate_(best), err_est_(err) {}
    double best_estimate() const { return best_estimate_; }
    double err_est() const { return err_est_; }

private:
    double best_estimate_;
    double err_est_;
};

/// Integrate f over the finite interval [a, b].
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureSpec& spec = {});

/// Integrate f over [0, inf) via the t/(1-t) map.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         const QuadratureSpec& spec = {});

/// E[g(R)] for R Rayleigh-distributed with density 2*pi*lambda*r*exp(-pi*lambda*r^2).
/// Exact substitution v = exp(-pi*lambda*r^2), so the expectation becomes
/// the integral of g(r(v)) dv over (0, 1).
QuadratureResult rayleigh_expectation(const std::function<double(double)>& g,
                                      double lambda, const QuadratureSpec& spec = {});

/// Same expectation in radial space: the weight stays explicit and the
/// half-line is folded by r = y/((1-y)*sqrt(pi*lambda)). Preferable when
/// g blows up logarithmically at 0 (the v-map would concentrate that blow-up
/// at an endpoint with unbounded derivatives).
QuadratureResult rayleigh_expectation_radial(const std::function<double(double)>& g,
                                             double lambda,
                                             const QuadratureSpec& spec = {});

}  // namespace hetnet
