#include "hetnet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace hetnet {

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule,
// as tabulated in QUADPACK dqk15.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
};

// One G7-K15 application on [a, b]. Error estimate per QUADPACK.
Panel kronrod15(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    const double fc = f(center);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    double resabs = std::abs(k15);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[i] = f1;
        fv[14 - i] = f2;
        k15 += kWgk[i] * (f1 + f2);
        if (i % 2 == 1) g7 += kWg[i / 2] * (f1 + f2);
        resabs += kWgk[i] * (std::abs(f1) + std::abs(f2));
    }
    const double mean = 0.5 * k15;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));

    double err = std::abs(k15 - g7) * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps)) err = std::max(err, 50.0 * eps * resabs);

    return Panel{a, b, k15 * half, err};
}

bool nonfinite(double x) { return !std::isfinite(x); }

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0) || spec.abs_tol < 0.0 || spec.max_subdivisions < 1)
        throw std::invalid_argument("QuadratureSpec: invalid tolerances");
    if (a == b) return {0.0, 0.0};

    std::vector<Panel> panels;
    panels.reserve(64);
    panels.push_back(kronrod15(f, a, b));

    for (int iter = 0; iter < spec.max_subdivisions; ++iter) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            err += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (nonfinite(total))
            throw QuadratureError("integrate: non-finite integrand", total, err);
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
            return {total, err};

        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b)  // worst panel at machine resolution
            return {total, err};
        panels[worst] = kronrod15(f, p.a, mid);
        panels.push_back(kronrod15(f, mid, p.b));
    }

    double total = 0.0, err = 0.0;
    for (const auto& p : panels) {
        total += p.value;
        err += p.error;
    }
    throw QuadratureError("integrate: tolerance not reached after " +
                              std::to_string(spec.max_subdivisions) +
                              " subdivisions (err_est " + std::to_string(err) + ")",
                          total, err);
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         const QuadratureSpec& spec) {
    // x = t/(1-t) sends (0,1) to (0,inf); dx = dt/(1-t)^2.
    auto mapped = [&f](double t) {
        const double om = 1.0 - t;
        const double x = t / om;
        return f(x) / (om * om);
    };
    return integrate(mapped, 0.0, 1.0, spec);
}

QuadratureResult rayleigh_expectation(const std::function<double(double)>& g,
                                      double lambda, const QuadratureSpec& spec) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("rayleigh_expectation: lambda must be > 0");
    const double c = std::numbers::pi * lambda;
    auto mapped = [&g, c](double v) {
        return g(std::sqrt(-std::log(v) / c));
    };
    return integrate(mapped, 0.0, 1.0, spec);
}

QuadratureResult rayleigh_expectation_radial(const std::function<double(double)>& g,
                                             double lambda,
                                             const QuadratureSpec& spec) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("rayleigh_expectation_radial: lambda must be > 0");
    const double c = std::numbers::pi * lambda;
    const double scale = 1.0 / std::sqrt(c);
    auto mapped = [&g, c, scale](double y) {
        const double om = 1.0 - y;
        const double r = scale * y / om;
        const double weight = 2.0 * c * r * std::exp(-c * r * r);
        return g(r) * weight * scale / (om * om);
    };
    return integrate(mapped, 0.0, 1.0, spec);
}

}  // namespace hetnet
