#pragma once

#include "tordeg/partition.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tordeg {

enum class MetricMode { exact, glued };
enum class PotentialKind {
    toric_raw,     // -2 sum_m log a_m (raw): reproduces the exact mode
    glued_shifted, // sum_p mu_p log h_p with the eta-shifted norms
};

/// Bounded model volume factor. "one" keeps rho == 1; "theta_bump" adds a
/// low-harmonic angular factor used to exercise the angular quadrature.
inline double rho_value(const DegenerationSpec& spec, const ChartPoint& p) {
    if (spec.rho == "one") return 1.0;
    if (spec.rho == "theta_bump") {
        double th = p.theta.empty() ? 0.0 : p.theta[0];
        return 1.0 + 0.25 * std::cos(th);
    }
    throw std::invalid_argument("unknown rho model '" + spec.rho + "'");
}

inline bool rho_is_constant(const DegenerationSpec& spec) { return spec.rho == "one"; }

/// Exact toric metric in the proper frame {W_j = a_j z_j d/dz_j}:
/// g_jk = delta_jk + sum over rays off the chart of (m^j a_j)(m^k a_k)/a_m^2,
/// all in raw log-coordinates. Gram structure, so g - I is PSD.
inline Eigen::MatrixXd metric_exact(const ToricModel& model, const ChartPoint& p) {
    const int n = model.rank();
    const Chart& ch = model.chart(p.chart);
    auto raw = model.a_values(p, AMode::raw);
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < model.n_rays(); ++i) {
        bool in_basis = false;
        for (auto b : ch.basis)
            if (b == i) in_basis = true;
        if (in_basis) continue;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                g(j, k) += (ch.coords_d[i][static_cast<std::size_t>(j)] * p.a[static_cast<std::size_t>(j)]) *
                           (ch.coords_d[i][static_cast<std::size_t>(k)] * p.a[static_cast<std::size_t>(k)]) /
                           (raw[i] * raw[i]);
    }
    return g;
}

/// Stratum potential factor h_p = tau^{2(|Sigma_p(1)| - l)} prod eta^2 / a_m^2
/// over the stratum's Cartier rays and transition rays.
inline double log_h_stratum(const ToricModel& model, const ChartPoint& p, std::size_t stratum,
                            AMode mode = AMode::shifted) {
    const StratumSets& st = model.strata_sets().at(stratum);
    const double eta = model.spec().eta;
    auto a = model.a_values(p, mode);
    double lh = 2.0 * (static_cast<double>(st.lower.size()) - st.l) * std::log(p.tau);
    for (auto i : st.lower) lh += 2.0 * (std::log(eta) - std::log(a[i]));
    for (auto i : st.upper) lh += 2.0 * (std::log(eta) - std::log(a[i]));
    return lh;
}

inline double h_weight(const ToricModel& model, const ChartPoint& p, std::size_t stratum,
                       AMode mode = AMode::shifted) {
    return std::exp(log_h_stratum(model, p, stratum, mode));
}

/// log of the glued potential factor, log h = sum_p mu_p log h_p.
inline double glued_log_h(const ToricModel& model, const ChartPoint& p, AMode mode = AMode::shifted) {
    auto part = partition(model, p);
    double lh = 0;
    for (std::size_t s = 0; s < part.mu.size(); ++s) {
        if (part.mu[s] == 0) continue;
        lh += part.mu[s] * log_h_stratum(model, p, s, mode);
    }
    return lh;
}

inline double log_potential(const ToricModel& model, const ChartPoint& p, PotentialKind kind) {
    switch (kind) {
        case PotentialKind::toric_raw: {
            auto raw = model.a_values(p, AMode::raw);
            double lv = 0;
            for (double v : raw) lv -= 2.0 * std::log(v);
            return lv;
        }
        case PotentialKind::glued_shifted:
            return glued_log_h(model, p, AMode::shifted);
    }
    throw std::logic_error("unreachable");
}

namespace detail {

/// Hessian of f at p in the chart coordinates (a, theta) by central
/// differences with step 1e-4 max(1, a_j), Richardson-extrapolated once.
inline Eigen::MatrixXd fd_hessian(const std::function<double(const ChartPoint&)>& f, const ChartPoint& p,
                                  bool with_theta, int n) {
    const int dim = with_theta ? 2 * n : n;
    auto shift = [&](int v, double d) {
        ChartPoint q = p;
        if (q.theta.empty()) q.theta.assign(static_cast<std::size_t>(n), 0.0);
        if (v < n) q.a[static_cast<std::size_t>(v)] += d;
        else q.theta[static_cast<std::size_t>(v - n)] += d;
        return q;
    };
    auto step_of = [&](int v) {
        return v < n ? 1e-4 * std::max(1.0, p.a[static_cast<std::size_t>(v)]) : 1e-4;
    };
    auto hess_at = [&](double scale) {
        Eigen::MatrixXd H(dim, dim);
        double f0 = f(p);
        for (int v = 0; v < dim; ++v) {
            double h = step_of(v) * scale;
            double fp = f(shift(v, h)), fm = f(shift(v, -h));
            H(v, v) = (fp - 2 * f0 + fm) / (h * h);
        }
        for (int v = 0; v < dim; ++v)
            for (int w = v + 1; w < dim; ++w) {
                double hv = step_of(v) * scale, hw = step_of(w) * scale;
                ChartPoint pp = shift(v, hv);
                ChartPoint pm = shift(v, hv);
                ChartPoint mp = shift(v, -hv);
                ChartPoint mm = shift(v, -hv);
                auto bump = [&](ChartPoint& q, int vv, double d) {
                    if (q.theta.empty()) q.theta.assign(static_cast<std::size_t>(n), 0.0);
                    if (vv < n) q.a[static_cast<std::size_t>(vv)] += d;
                    else q.theta[static_cast<std::size_t>(vv - n)] += d;
                };
                bump(pp, w, hw);
                bump(pm, w, -hw);
                bump(mp, w, hw);
                bump(mm, w, -hw);
                double d = (f(pp) - f(pm) - f(mp) + f(mm)) / (4 * hv * hw);
                H(v, w) = H(w, v) = d;
            }
        return H;
    };
    Eigen::MatrixXd coarse = hess_at(2.0), fine = hess_at(1.0);
    return (4.0 * fine - coarse) / 3.0;
}

} // namespace detail

/// Glued-mode metric in the proper frame, from second mixed log-derivatives of
/// the potential. For torus-invariant potentials this is
/// G_jk = (a_j a_k / 2) d^2 logV / da_j da_k; with an angular rho factor the
/// (u, theta)-Hessian combination is used instead.
inline Eigen::MatrixXd metric_fd(const ToricModel& model, const ChartPoint& p, PotentialKind kind) {
    const int n = model.rank();
    bool with_theta = !rho_is_constant(model.spec());
    auto potential = [&](const ChartPoint& q) {
        double lv = log_potential(model, q, kind);
        if (with_theta) lv += std::log(rho_value(model.spec(), q));
        return lv;
    };
    Eigen::MatrixXd H = detail::fd_hessian(potential, p, with_theta, n);
    Eigen::MatrixXd G(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            // d^2/du_j du_k = 4 d^2/da_j da_k (u = -a/2); frame factor a_j a_k / 8
            double v = 4.0 * H(j, k);
            if (with_theta) v += H(n + j, n + k);
            G(j, k) = p.a[static_cast<std::size_t>(j)] * p.a[static_cast<std::size_t>(k)] * v / 8.0;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    if (es.eigenvalues().minCoeff() <= 0) {
        std::ostringstream os;
        os << "positivity failure at chart " << p.chart << ", tau " << p.tau << ", a = [";
        for (std::size_t j = 0; j < p.a.size(); ++j) os << (j ? ", " : "") << p.a[j];
        os << "]";
        throw std::runtime_error(os.str());
    }
    return G;
}

struct MetricSample {
    Eigen::MatrixXd g;
    double volume_density = 0; // coefficient against prod da_j dtheta_j (times n! / pi^n)
    double h = 0;              // glued potential factor at the point
    double phi = 0;            // Monge-Ampere defect
    double min_eig = 0, max_eig = 0;
};

inline double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Volume density of omega^n against prod da_j dtheta_j, up to the universal
/// n! (1/pi)^n: det(g) rho / prod a_j^2.
inline double volume_density(const ToricModel& model, const ChartPoint& p, const Eigen::MatrixXd& g) {
    double v = g.determinant() * rho_value(model.spec(), p);
    for (double a : p.a) v /= a * a;
    return v;
}

/// Monge-Ampere defect: phi = -log( omega^n-density / (h * model-density) ).
/// The exact-mode metric is used for omega^n; h is the glued eta-shifted
/// factor by default, or the deepest stratum's raw factor for the pure toric
/// consistency checks.
inline double phi_defect(const ToricModel& model, const ChartPoint& p,
                         PotentialKind h_kind = PotentialKind::glued_shifted) {
    Eigen::MatrixXd g = metric_exact(model, p);
    double lv = std::log(factorial(model.rank())) + std::log(g.determinant());
    for (double a : p.a) lv -= 2.0 * std::log(a);
    double lh;
    if (h_kind == PotentialKind::glued_shifted) lh = glued_log_h(model, p, AMode::shifted);
    else {
        // deepest stratum (the origin cone), raw a-coordinates
        std::size_t origin = 0;
        for (std::size_t s = 0; s < model.strata_sets().size(); ++s)
            if (model.strata_sets()[s].dim == 0) origin = s;
        lh = log_h_stratum(model, p, origin, AMode::raw);
    }
    return -(lv - lh);
}

inline MetricSample metric_sample(const ToricModel& model, const ChartPoint& p,
                                  MetricMode mode = MetricMode::exact) {
    MetricSample s;
    s.g = (mode == MetricMode::exact) ? metric_exact(model, p)
                                      : metric_fd(model, p, PotentialKind::glued_shifted);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.g);
    s.min_eig = es.eigenvalues().minCoeff();
    s.max_eig = es.eigenvalues().maxCoeff();
    s.volume_density = volume_density(model, p, s.g);
    s.h = std::exp(glued_log_h(model, p, AMode::shifted));
    s.phi = phi_defect(model, p);
    return s;
}

/// Frame derivative of a scalar field: (W_j f)(p) = -a_j df/da_j.
inline double frame_derivative(const std::function<double(const ChartPoint&)>& f, const ChartPoint& p,
                               std::size_t j) {
    double h = 1e-4 * std::max(1.0, p.a[j]);
    ChartPoint hi = p, lo = p;
    hi.a[j] += h;
    lo.a[j] -= h;
    return -p.a[j] * (f(hi) - f(lo)) / (2 * h);
}

struct BoundedGeometryReport {
    std::vector<double> d1_metric; // |W_j g_kl| magnitudes, flattened
    std::vector<double> d2_metric; // |W_i W_j g_kl|
    std::vector<double> d1_phi;
    std::vector<double> d2_phi;
    double max_first = 0, max_second = 0;
    double curvature = 0; // Gaussian curvature of the chart metric, n = 1 only
};

/// Finite-difference magnitudes of the metric entries and of phi along the
/// proper frame, order <= 2; for rank 1 also the Gaussian curvature
/// K = -(2/lambda) d^2 log(lambda) / da^2 with lambda = g_11 / a_1^2.
inline BoundedGeometryReport bounded_geometry_sample(const ToricModel& model, const ChartPoint& p,
                                                     int order = 2) {
    if (order < 0 || order > 2) throw std::invalid_argument("bounded_geometry_sample: order must be <= 2");
    BoundedGeometryReport rep;
    const int n = model.rank();
    auto entry = [&](int k, int l) {
        return [&model, k, l](const ChartPoint& q) { return metric_exact(model, q)(k, l); };
    };
    auto phi_at = [&model](const ChartPoint& q) { return phi_defect(model, q); };
    if (order >= 1) {
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int j = 0; j < n; ++j) {
                    double d = frame_derivative(entry(k, l), p, static_cast<std::size_t>(j));
                    rep.d1_metric.push_back(std::abs(d));
                    rep.max_first = std::max(rep.max_first, std::abs(d));
                }
        for (int j = 0; j < n; ++j) {
            double d = frame_derivative(phi_at, p, static_cast<std::size_t>(j));
            rep.d1_phi.push_back(std::abs(d));
            rep.max_first = std::max(rep.max_first, std::abs(d));
        }
    }
    if (order >= 2) {
        auto second = [&](const std::function<double(const ChartPoint&)>& f, std::size_t i, std::size_t j) {
            auto inner = [&](const ChartPoint& q) { return frame_derivative(f, q, j); };
            return frame_derivative(inner, p, i);
        };
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double d = second(entry(k, l), static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                        rep.d2_metric.push_back(std::abs(d));
                        rep.max_second = std::max(rep.max_second, std::abs(d));
                    }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double d = second(phi_at, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                rep.d2_phi.push_back(std::abs(d));
                rep.max_second = std::max(rep.max_second, std::abs(d));
            }
    }
    if (n == 1) {
        auto log_lambda = [&](const ChartPoint& q) {
            return std::log(metric_exact(model, q)(0, 0)) - 2.0 * std::log(q.a[0]);
        };
        double h = 1e-3 * std::max(1.0, p.a[0]);
        ChartPoint hi = p, lo = p;
        hi.a[0] += h;
        lo.a[0] -= h;
        double d2 = (log_lambda(hi) - 2 * log_lambda(p) + log_lambda(lo)) / (h * h);
        double lambda = std::exp(log_lambda(p));
        rep.curvature = -2.0 * d2 / lambda * 1.0; // K = -(1/(2 lambda)) * 4 d^2/da^2 log lambda
    }
    return rep;
}

} // namespace tordeg
