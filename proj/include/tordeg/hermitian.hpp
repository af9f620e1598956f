#pragma once

#include <cmath>
#include <stdexcept>

namespace tordeg {

inline double smoothstep(double x) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    return x * x * (3 - 2 * x);
}

/// Hermitian model for the section norms: log|s|^2 = psi(log|s|^2) with
/// psi(x) = x for x <= x0 and psi(x) = 0 for x >= x1, so the norm saturates to
/// 1 away from the divisor and |s| <= 1 everywhere it matters.
struct HermitianModel {
    double eta;
    double x0 = -4.0;
    double x1 = -1.0;

    explicit HermitianModel(double eta_) : eta(eta_) {
        if (eta <= 0) throw std::invalid_argument("eta must be positive");
        if (!(x0 < x1)) throw std::invalid_argument("need x0 < x1");
    }

    double psi(double x) const {
        if (x <= x0) return x;
        return x * (1.0 - smoothstep((x - x0) / (x1 - x0)));
    }

    double psi_prime(double x) const {
        if (x <= x0) return 1.0;
        double u = (x - x0) / (x1 - x0);
        if (u >= 1.0) return 0.0;
        double s = u * u * (3 - 2 * u);
        double sp = 6 * u * (1 - u) / (x1 - x0);
        return (1.0 - s) - x * sp;
    }

    /// |psi'| on the blend zone, for boundedness reports.
    double psi_prime_bound() const {
        double m = 1.0;
        for (int i = 0; i <= 200; ++i) {
            double x = x0 + (x1 - x0) * i / 200.0;
            m = std::max(m, std::abs(psi_prime(x)));
        }
        return m;
    }

    /// a_m = eta - log|s_m|^2 from the raw positive coordinate a_raw = -log|s_m|^2.
    double shifted(double a_raw) const { return eta - psi(-a_raw); }

    /// The norm saturates (a_m = eta exactly) once |s|^2 >= e^{x1}.
    bool saturated(double a_raw) const { return -a_raw >= x1; }
};

} // namespace tordeg
