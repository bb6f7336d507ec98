#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "hetnet/special_functions.hpp"

// Private accelerator for the interference kernel: the Laplace factors
// evaluate 2F1(1, 1-2/alpha; 2-2/alpha; z) millions of times along the ray
// z <= 0 with a handful of distinct alphas. This caches the function per
// alpha as a dense cubic-Lagrange table in u = ln(-z); outside the table the
// transformed series are only a few terms and are evaluated directly.
//
// Node spacing 0.008 keeps the interpolation error near 1e-11, two orders
// below the tightest tolerance any caller requests; the unit tests compare
// table-backed results against the direct series.

namespace hetnet::detail {

class Hyp2f1Table {
public:
    explicit Hyp2f1Table(double alpha)
        : alpha_(alpha), u_min_(-26.0), inv_h_(125.0) {
        const double h = 1.0 / inv_h_;
        const std::size_t n = static_cast<std::size_t>((26.0 - u_min_) * inv_h_) + 1;
        values_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            values_[i] = hyp2f1_interference(alpha, -std::exp(u_min_ + h * i));
    }

    double operator()(double z) const {
        if (z == 0.0) return 1.0;
        const double u = std::log(-z);
        if (u <= u_min_ || u >= u_min_ + (values_.size() - 1) / inv_h_)
            return hyp2f1_interference(alpha_, z);  // few-term series out here
        const double x = (u - u_min_) * inv_h_;
        std::size_t k = static_cast<std::size_t>(x);
        if (k < 1) k = 1;
        if (k > values_.size() - 3) k = values_.size() - 3;
        const double t = x - static_cast<double>(k);
        // 4-point Lagrange on nodes k-1, k, k+1, k+2
        const double vm = values_[k - 1], v0 = values_[k], v1 = values_[k + 1],
                     v2 = values_[k + 2];
        const double a = t + 1.0, b = t, c = t - 1.0, d = t - 2.0;
        return -vm * (b * c * d) / 6.0 + v0 * (a * c * d) / 2.0 -
               v1 * (a * b * d) / 2.0 + v2 * (a * b * c) / 6.0;
    }

private:
    double alpha_;
    double u_min_;
    double inv_h_;
    std::vector<double> values_;
};

inline const Hyp2f1Table& hyp2f1_table_for(double alpha) {
    static std::mutex mutex;
    static std::map<double, std::unique_ptr<Hyp2f1Table>> tables;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = tables.find(alpha);
    if (it == tables.end())
        it = tables.emplace(alpha, std::make_unique<Hyp2f1Table>(alpha)).first;
    return *it->second;
}

}  // namespace hetnet::detail
