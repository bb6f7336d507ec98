#include "hetnet/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hetnet {

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: x must be > 0");
    return std::tgamma(x);
}

namespace {

constexpr int kMaxTerms = 200;
constexpr double kTermTol = 1e-16;

// 2F1(b, b; b+1; w) for w in [0, 1/2], b = 1 - 2/alpha.
// Terms: (b)_n w^n / n! * b/(b+n), all positive.
double series_pfaff(double b, double w) {
    double u = 1.0;  // (b)_n w^n / n!
    double sum = 0.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        const double term = u * b / (b + n);
        sum += term;
        if (term < kTermTol * sum) break;
        u *= w * (b + n) / (n + 1);
    }
    return sum;
}

// 2F1(1, 1; 1+q; y) for y in [0, 1/2). Terms: n!/(1+q)_n y^n.
double series_one_one(double q, double y) {
    double term = 1.0;
    double sum = 0.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        sum += term;
        if (term < kTermTol * sum) break;
        term *= y * (n + 1) / (1.0 + q + n);
    }
    return sum;
}

}  // namespace

double hyp2f1_interference(double alpha, double z) {
    if (!(alpha > 2.0))
        throw std::domain_error("hyp2f1_interference: alpha must be > 2");
    if (!(z <= 0.0))
        throw std::domain_error("hyp2f1_interference: z must be <= 0");
    if (z == 0.0) return 1.0;

    const double q = 2.0 / alpha;  // in (0, 1)
    const double b = 1.0 - q;

    if (z >= -1.0) {
        // Pfaff: F = (1-z)^(-b) * 2F1(b, b; b+1; z/(z-1)), argument in [0, 1/2].
        const double w = z / (z - 1.0);
        return std::pow(1.0 - z, -b) * series_pfaff(b, w);
    }

    // Inversion: F = C1 * (-z)^(-1) * 2F1(1, q; 1+q; 1/z) + C2 * (-z)^(q-1)
    // with C1 = -(alpha-2)/2 and C2 = (1-q)*Gamma(1-q)*Gamma(q).
    // The inner series argument 1/z lies in (-1, 0); a second Pfaff turn
    //   2F1(1, q; 1+q; x) = (1-x)^(-1) * 2F1(1, 1; 1+q; x/(x-1))
    // moves it into (0, 1/2).
    const double x = 1.0 / z;
    const double y = x / (x - 1.0);
    const double inner = series_one_one(q, y) / (1.0 - x);
    const double c1 = -(alpha - 2.0) / 2.0;
    const double c2 = b * std::tgamma(b) * std::tgamma(q);
    return c1 * inner / (-z) + c2 * std::pow(-z, q - 1.0);
}

double hyp2f1_interference_integral(double alpha, double z,
                                    const QuadratureSpec& spec) {
    if (!(alpha > 2.0))
        throw std::domain_error("hyp2f1_interference_integral: alpha must be > 2");
    if (!(z <= 0.0))
        throw std::domain_error("hyp2f1_interference_integral: z must be <= 0");
    if (z == 0.0) return 1.0;

    // (1-2/alpha) Int_0^1 u^(-2/alpha)/(1-z*u) du; substituting u = v^p with
    // p = alpha/(alpha-2) absorbs both the endpoint singularity and the
    // prefactor, leaving Int_0^1 dv/(1 - z*v^p).
    const double p = alpha / (alpha - 2.0);
    auto f = [p, z](double v) { return 1.0 / (1.0 - z * std::pow(v, p)); };
    return integrate(f, 0.0, 1.0, spec).value;
}

}  // namespace hetnet
