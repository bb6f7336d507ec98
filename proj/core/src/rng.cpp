#include "hetnet/rng.hpp"

namespace hetnet {

namespace {

double log_factorial(double k) {
    // Stirling with the first correction terms; exact table for small k.
    static const double table[] = {0.0, 0.0, 0.693147180559945, 1.791759469228055,
                                   3.178053830347946, 4.787491742782046,
                                   6.579251212010101, 8.525161361065415,
                                   10.604602902745251, 12.801827480081469};
    if (k < 10.0) return table[static_cast<int>(k)];
    const double k1 = k + 1.0;
    return (k1 - 0.5) * std::log(k1) - k1 + 0.9189385332046727 +
           1.0 / (12.0 * k1) - 1.0 / (360.0 * k1 * k1 * k1);
}

}  // namespace

std::uint64_t Xoshiro256pp::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
        // Multiplication method.
        const double limit = std::exp(-mean);
        double prod = uniform();
        std::uint64_t n = 0;
        while (prod > limit) {
            prod *= uniform();
            ++n;
        }
        return n;
    }
    // PTRS transformed rejection (Hormann 1993).
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * log_mean - mean - log_factorial(k))
            return static_cast<std::uint64_t>(k);
    }
}

}  // namespace hetnet
