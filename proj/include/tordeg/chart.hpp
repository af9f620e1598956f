#pragma once

#include "tordeg/degeneration.hpp"
#include "tordeg/hermitian.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tordeg {

/// One maximal-cone chart of the toric model: coordinates z_j = s_{m_j} for
/// the cone's rays, weight normalized to vanish on the cone. Every monomial's
/// raw log-coordinate is then a_m = w'_m tau + sum_j m^j a_j.
struct Chart {
    std::size_t maximal_pos = 0;        // position within fan.maximal
    std::vector<std::size_t> basis;     // ray indices of S_sigma, fixed order
    std::vector<Rat> w_norm;            // normalized weights per spec ray
    std::vector<std::vector<Rat>> coords; // per spec ray: coordinates m^j in the S_sigma basis
    std::vector<double> w_norm_d;
    std::vector<std::vector<double>> coords_d;
};

/// Stratum bookkeeping for the partition and the glued potential.
/// lower  = local Cartier rays of the stratum (the star rays of its cone):
///          the divisors through the stratum; their a_m grow near it.
/// upper  = rays of the stratum's cone: the transition coordinates toward
///          deeper strata; their a_m must stay below ~tau near the stratum.
struct StratumSets {
    std::size_t cone_index = 0;
    int dim = 0;
    int l = 0; // codimension of the stratum = rank of the local fan
    std::vector<std::size_t> lower;
    std::vector<std::size_t> upper;
};

/// Point of X_t in a chart, in raw positive log-coordinates a_j = -log|z_j|^2.
struct ChartPoint {
    std::size_t chart = 0;
    std::vector<double> a;     // a_j > 0 per chart coordinate
    std::vector<double> theta; // angles; empty means all zero
    double tau = 0.0;

    ChartPoint() = default;
    ChartPoint(std::size_t chart_, std::vector<double> a_, double tau_)
        : chart(chart_), a(std::move(a_)), tau(tau_) {
        for (double x : a)
            if (!(x > 0)) throw std::invalid_argument("ChartPoint: a_j must be positive");
        if (!(tau > 0)) throw std::invalid_argument("ChartPoint: tau must be positive");
    }
};

enum class AMode { raw, shifted }; // unshifted -log|s|^2 vs eta - log|s|_m^2

/// Precomputed chart/stratum data for one degeneration spec.
class ToricModel {
public:
    explicit ToricModel(const DegenerationSpec& spec) : spec_(&spec), herm_(spec.eta) {
        const int n = spec.rank;
        for (std::size_t mp = 0; mp < spec.n_maximal(); ++mp) {
            Chart ch;
            ch.maximal_pos = mp;
            const Cone& c = spec.maximal_cone(mp);
            if (c.rays.size() != static_cast<std::size_t>(n))
                throw std::invalid_argument("chart layer requires a simplicial fan");
            for (const auto& r : c.rays) ch.basis.push_back(spec.ray_index(r));
            RatMatrix R(n, n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    R(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                        Rat(c.rays[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
            ch.w_norm = normalize_against(spec.fan, spec.weight, mp);
            for (std::size_t i = 0; i < spec.rays.size(); ++i) {
                auto coords = rat_solve(R, to_rat(spec.rays[i]));
                if (!coords) throw std::logic_error("chart basis does not span");
                ch.coords.push_back(*coords);
            }
            ch.w_norm_d.resize(spec.rays.size());
            ch.coords_d.assign(spec.rays.size(), std::vector<double>(n));
            for (std::size_t i = 0; i < spec.rays.size(); ++i) {
                ch.w_norm_d[i] = to_double(ch.w_norm[i]);
                for (int j = 0; j < n; ++j)
                    ch.coords_d[i][static_cast<std::size_t>(j)] =
                        to_double(ch.coords[i][static_cast<std::size_t>(j)]);
            }
            charts_.push_back(std::move(ch));
        }
        build_strata_sets();
    }

    const DegenerationSpec& spec() const { return *spec_; }
    const HermitianModel& hermitian() const { return herm_; }
    const std::vector<Chart>& charts() const { return charts_; }
    const Chart& chart(std::size_t i) const { return charts_.at(i); }
    const std::vector<StratumSets>& strata_sets() const { return strata_; }
    std::size_t n_rays() const { return spec_->rays.size(); }
    int rank() const { return spec_->rank; }

    /// Raw a_m = w'_m tau + sum_j m^j a_j for every spec ray, in the point's chart.
    std::vector<double> raw_a(const ChartPoint& p) const {
        const Chart& ch = charts_.at(p.chart);
        std::vector<double> out(n_rays());
        for (std::size_t i = 0; i < n_rays(); ++i) {
            double v = ch.w_norm_d[i] * p.tau;
            for (std::size_t j = 0; j < p.a.size(); ++j) v += ch.coords_d[i][j] * p.a[j];
            out[i] = v;
        }
        return out;
    }

    std::vector<double> a_values(const ChartPoint& p, AMode mode = AMode::shifted) const {
        auto raw = raw_a(p);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            bool in_basis = false;
            for (auto b : charts_.at(p.chart).basis)
                if (b == i) in_basis = true;
            if (!in_basis && !(raw[i] > 0))
                throw std::invalid_argument("a_values: point outside chart domain (a_m <= 0)");
        }
        if (mode == AMode::raw) return raw;
        for (auto& v : raw) v = herm_.shifted(v);
        return raw;
    }

    /// A_sigma(x) = min over rays outside the chart cone of a_m(x).
    double chart_depth(const ChartPoint& p, std::size_t chart_index) const {
        auto raw = raw_a(p);
        double m = std::numeric_limits<double>::infinity();
        const Chart& ch = charts_.at(chart_index);
        for (std::size_t i = 0; i < n_rays(); ++i) {
            bool in_basis = false;
            for (auto b : ch.basis)
                if (b == i) in_basis = true;
            if (!in_basis) m = std::min(m, raw[i]);
        }
        return m;
    }

    /// Membership in the chart's own quadrature cell U_{p sigma}^0: every a_m
    /// at least eta and the chart's depth maximal among all charts
    /// (lexicographic tie-break on the chart index).
    bool in_cell(const ChartPoint& p) const {
        auto raw = raw_a(p);
        for (double v : raw)
            if (v < spec_->eta - 1e-12) return false;
        double own = chart_depth(p, p.chart);
        for (std::size_t c = 0; c < charts_.size(); ++c) {
            double d = chart_depth(p, c);
            if (d > own + 1e-12) return false;
            if (std::abs(d - own) <= 1e-12 && c < p.chart) return false;
        }
        return true;
    }

    /// Exact model of the stratum neighborhood U_p^0 on X_t. Near the stratum
    /// the section norms of its cone's rays saturate; the remaining divisors
    /// are entered to at least depth `theta_depth`; the (shrunk) neighborhoods
    /// of divisor strata whose closure misses the stratum are excluded.
    bool in_stratum_nbhd(const ChartPoint& p, std::size_t stratum_index, double theta_depth = 0) const {
        if (theta_depth <= 0) theta_depth = 2 * spec_->eta;
        const StratumSets& st = strata_.at(stratum_index);
        const Cone& cone_p = spec_->fan.cones[st.cone_index];
        auto raw = raw_a(p);
        auto in_cone = [&](std::size_t ray) {
            return std::count(cone_p.rays.begin(), cone_p.rays.end(), spec_->rays[ray]) > 0;
        };
        for (std::size_t i = 0; i < n_rays(); ++i) {
            if (in_cone(i)) {
                if (!herm_.saturated(raw[i])) return false;
            } else {
                if (herm_.shifted(raw[i]) < theta_depth) return false;
            }
        }
        // removed shrunk neighborhoods of divisors not containing the stratum
        for (std::size_t mp = 0; mp < spec_->n_maximal(); ++mp) {
            const Cone& q = spec_->maximal_cone(mp);
            if (is_face_of(cone_p, q)) continue;
            bool inside_q = true;
            for (std::size_t i = 0; i < n_rays(); ++i) {
                bool in_q = std::count(q.rays.begin(), q.rays.end(), spec_->rays[i]) > 0;
                if (!in_q && herm_.shifted(raw[i]) < theta_depth) { inside_q = false; break; }
            }
            if (inside_q) return false;
        }
        return true;
    }

    bool is_face_of(const Cone& a, const Cone& b) const {
        if (a.rank > b.rank) return false;
        if (a.rank == b.rank) return a.rays == b.rays;
        for (const auto& f : faces(b, a.rank))
            if (f.rays == a.rays) return true;
        return false;
    }

    bool stratum_face_of(std::size_t p_idx, std::size_t q_idx) const {
        return is_face_of(spec_->fan.cones[strata_.at(p_idx).cone_index],
                          spec_->fan.cones[strata_.at(q_idx).cone_index]);
    }

private:
    void build_strata_sets() {
        const Fan& fan = spec_->fan;
        for (std::size_t ci = 0; ci < fan.cones.size(); ++ci) {
            StratumSets st;
            st.cone_index = ci;
            st.dim = fan.cones[ci].rank;
            st.l = spec_->rank - st.dim;
            const Cone& cp = fan.cones[ci];
            for (std::size_t i = 0; i < spec_->rays.size(); ++i) {
                bool in_p = std::count(cp.rays.begin(), cp.rays.end(), spec_->rays[i]) > 0;
                if (in_p) {
                    st.upper.push_back(i);
                    continue;
                }
                // star ray: some cone one dimension up contains both the stratum cone and this ray
                for (std::size_t cj = 0; cj < fan.cones.size(); ++cj) {
                    if (fan.cones[cj].rank != st.dim + 1) continue;
                    const Cone& cq = fan.cones[cj];
                    if (!std::count(cq.rays.begin(), cq.rays.end(), spec_->rays[i])) continue;
                    if (is_face_of(cp, cq)) {
                        st.lower.push_back(i);
                        break;
                    }
                }
            }
            strata_.push_back(std::move(st));
        }
    }

    const DegenerationSpec* spec_;
    HermitianModel herm_;
    std::vector<Chart> charts_;
    std::vector<StratumSets> strata_;
};

} // namespace tordeg
