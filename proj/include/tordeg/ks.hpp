#pragma once

#include "tordeg/metric.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tordeg {

/// Horizontal lift of t d/dt cutting the fibre directions out of the model
/// metric: W = t d/dt + sum_j q_j z_j d/dz_j with g p = -r, p_j = q_j / a_j,
/// r_k the contraction coefficient of i(t d/dt) omega in the dual proper frame.
struct HorizontalField {
    std::vector<double> q;     // coefficients of z_j d/dz_j
    std::vector<double> frame; // p_j = q_j / a_j, coefficients of W_j
    double residual = 0;       // linear-solve residual, sup norm
};

/// Contraction coefficients r_k = a_k sum_{m not in S} w'_m m^k / a_m^2.
inline Eigen::VectorXd horizontal_rhs(const ToricModel& model, const ChartPoint& p) {
    const int n = model.rank();
    const Chart& ch = model.chart(p.chart);
    auto raw = model.a_values(p, AMode::raw);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < model.n_rays(); ++i) {
        if (ch.w_norm_d[i] == 0) continue; // rays of the chart cone
        for (int k = 0; k < n; ++k)
            r(k) += p.a[static_cast<std::size_t>(k)] * ch.w_norm_d[i] *
                    ch.coords_d[i][static_cast<std::size_t>(k)] / (raw[i] * raw[i]);
    }
    return r;
}

inline HorizontalField ks_field(const ToricModel& model, const ChartPoint& p) {
    const int n = model.rank();
    Eigen::MatrixXd g = metric_exact(model, p);
    Eigen::VectorXd r = horizontal_rhs(model, p);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    if (!lu.isInvertible()) throw std::runtime_error("ks_field: singular metric");
    Eigen::VectorXd frame = lu.solve(-r);
    HorizontalField out;
    out.frame.resize(static_cast<std::size_t>(n));
    out.q.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        out.frame[static_cast<std::size_t>(j)] = frame(j);
        out.q[static_cast<std::size_t>(j)] = frame(j) * p.a[static_cast<std::size_t>(j)];
    }
    out.residual = (g * frame + r).cwiseAbs().maxCoeff();
    return out;
}

/// Closed-form squared dbar-norm of the horizontal field in the exact toric
/// model: sum_j 4 a_j^2 | sum_{m not in S} w'_m m^j / a_m^2 |^2.
inline double dbar_norm_sq(const ToricModel& model, const ChartPoint& p) {
    const int n = model.rank();
    const Chart& ch = model.chart(p.chart);
    auto raw = model.a_values(p, AMode::raw);
    double total = 0;
    for (int j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < model.n_rays(); ++i) {
            if (ch.w_norm_d[i] == 0) continue;
            s += ch.w_norm_d[i] * ch.coords_d[i][static_cast<std::size_t>(j)] / (raw[i] * raw[i]);
        }
        double aj = p.a[static_cast<std::size_t>(j)];
        total += 4.0 * aj * aj * s * s;
    }
    return total;
}

/// Full metric-contracted dbar-energy of W from finite differences of the
/// solved coefficients: sum over vector index j and form index k of
/// g(E_j, E_k-bar) g^{pq-inv} (W_p-bar q_j)(W_q-bar q_k) with E_j = z_j d/dz_j.
/// Carries the bounded rho-type corrections that the closed form drops.
inline double dbar_norm_sq_fd(const ToricModel& model, const ChartPoint& p) {
    const int n = model.rank();
    Eigen::MatrixXd g = metric_exact(model, p);
    Eigen::MatrixXd ginv = g.inverse();
    // F(k, j) = (W_k-bar q_j) = -a_k dq_j/da_k
    Eigen::MatrixXd F(n, n);
    for (int k = 0; k < n; ++k) {
        double h = 1e-4 * std::max(1.0, p.a[static_cast<std::size_t>(k)]);
        ChartPoint hi = p, lo = p;
        hi.a[static_cast<std::size_t>(k)] += h;
        lo.a[static_cast<std::size_t>(k)] -= h;
        auto qhi = ks_field(model, hi).q;
        auto qlo = ks_field(model, lo).q;
        for (int j = 0; j < n; ++j)
            F(k, j) = -p.a[static_cast<std::size_t>(k)] *
                      (qhi[static_cast<std::size_t>(j)] - qlo[static_cast<std::size_t>(j)]) / (2 * h);
    }
    double total = 0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            double gEjk = g(j, k) / (p.a[static_cast<std::size_t>(j)] * p.a[static_cast<std::size_t>(k)]);
            for (int pi = 0; pi < n; ++pi)
                for (int qi = 0; qi < n; ++qi) total += gEjk * ginv(pi, qi) * F(pi, j) * F(qi, k);
        }
    return total;
}

} // namespace tordeg
