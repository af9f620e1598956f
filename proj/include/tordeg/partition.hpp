#pragma once

#include "tordeg/chart.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tordeg {

/// Smoothed minimum: min'(x,y) = min(x,y) - ((1 - |x-y|)_+)^4 / 8. The quartic
/// bump has slope 1/2 at gap 0, which makes the even extension C^2; the dip at
/// a tie is 1/8. Coincides with min at gaps >= 1. Lists fold left-associatively.
inline double soft_min2(double x, double y) {
    double m = std::min(x, y);
    double g = 1.0 - std::abs(x - y);
    if (g <= 0) return m;
    double g2 = g * g;
    return m - g2 * g2 / 8.0;
}

inline double soft_min(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("soft_min: empty argument list");
    double acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = soft_min2(acc, xs[i]);
    return acc;
}

/// Increasing C^1 profile: 0 below 0, 1 above 1.
inline double mu_profile(double x) { return smoothstep(x); }

struct PartitionValue {
    std::vector<double> mu;       // normalized, one per stratum, sums to 1
    std::vector<double> mu_tilde; // raw bumps
};

/// Partition functions over the strata: for stratum p the bump saturates when
/// every divisor through p is entered well past eta and every transition
/// coordinate of p's cone stays below tau/eta. Uses the shifted a-model, whose
/// saturation makes the support condition exact.
inline PartitionValue partition(const ToricModel& model, const ChartPoint& p) {
    const double eta = model.spec().eta;
    const double scale = std::log(p.tau / (eta * eta));
    if (!(scale > 0)) throw std::invalid_argument("partition: need tau > eta^2");
    auto a = model.a_values(p, AMode::shifted);
    PartitionValue out;
    out.mu_tilde.resize(model.strata_sets().size());
    for (std::size_t s = 0; s < model.strata_sets().size(); ++s) {
        const StratumSets& st = model.strata_sets()[s];
        std::vector<double> args;
        for (auto i : st.lower) args.push_back(std::log(a[i] / eta));
        for (auto i : st.upper) args.push_back(std::log(p.tau / (a[i] * eta)));
        out.mu_tilde[s] = mu_profile(soft_min(args) / scale);
    }
    double total = 0;
    for (double v : out.mu_tilde) total += v;
    if (!(total > 0)) throw std::invalid_argument("partition: point outside partition cover");
    out.mu.resize(out.mu_tilde.size());
    for (std::size_t s = 0; s < out.mu.size(); ++s) out.mu[s] = out.mu_tilde[s] / total;
    return out;
}

/// Frame gradient of a normalized partition function: components
/// (W_j mu_p) = -a_j d(mu_p)/d(a_j), by central differences in the chart coordinates.
inline std::vector<double> partition_frame_gradient(const ToricModel& model, const ChartPoint& p,
                                                    std::size_t stratum) {
    std::vector<double> grad(p.a.size(), 0.0);
    for (std::size_t j = 0; j < p.a.size(); ++j) {
        double h = 1e-4 * std::max(1.0, p.a[j]);
        ChartPoint hi = p, lo = p;
        hi.a[j] += h;
        lo.a[j] -= h;
        double d = (partition(model, hi).mu[stratum] - partition(model, lo).mu[stratum]) / (2 * h);
        grad[j] = -p.a[j] * d;
    }
    return grad;
}

} // namespace tordeg
