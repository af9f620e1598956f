#pragma once

#include "tordeg/fan.hpp"

#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tordeg {

/// Toric degeneration data: convex PL weight class on a complete fan, plus the
/// analytic parameters every downstream analysis reads (eta, tau grid, rho).
/// Construction convexifies, so the stored ray/weight/fan triple is always the
/// reduced one; the raw inputs are kept for provenance.
struct DegenerationSpec {
    std::string id;
    int rank = 0;
    std::vector<LatticeVector> input_rays;
    std::vector<Rat> input_weights;

    std::vector<LatticeVector> rays; // surviving Sigma(1)
    std::vector<Rat> weights;
    Fan fan;
    PLWeight weight;
    bool input_was_convex = true;

    double eta = 10.0;
    std::vector<double> tau_grid;
    std::string rho = "one"; // bounded model volume factor; "one" keeps rho == 1

    static DegenerationSpec build(std::string id, int rank, std::vector<LatticeVector> rays_in,
                                  std::vector<Rat> weights_in, double eta = 10.0,
                                  std::vector<double> tau_grid = {1e3, 1e4, 1e5, 1e6},
                                  std::string rho = "one") {
        DegenerationSpec s;
        s.id = std::move(id);
        s.rank = rank;
        s.input_rays = std::move(rays_in);
        s.input_weights = std::move(weights_in);
        s.eta = eta;
        s.tau_grid = std::move(tau_grid);
        s.rho = std::move(rho);
        for (const auto& r : s.input_rays)
            if (static_cast<int>(r.size()) != rank)
                throw std::invalid_argument("spec '" + s.id + "': ray dimension != rank");
        auto b = build_fan(s.input_rays, s.input_weights);
        s.rays = b.weight.rays;
        s.weights = b.weight.values;
        s.fan = std::move(b.fan);
        s.weight = std::move(b.weight);
        s.input_was_convex = b.convex;
        s.validate_interior();
        return s;
    }

    std::size_t n_maximal() const { return fan.maximal.size(); }
    const Cone& maximal_cone(std::size_t pos) const { return fan.cones[fan.maximal[pos]]; }
    const std::vector<Rat>& support_of(std::size_t pos) const { return weight.support[pos]; }

    std::size_t ray_index(const LatticeVector& m) const {
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (rays[i] == m) return i;
        throw std::logic_error("ray not in Sigma(1)");
    }

    /// The marked parameter is interior to the degeneration cone iff the weight
    /// normalized against any maximal cone is strictly positive off that cone.
    void validate_interior() const {
        for (std::size_t mp = 0; mp < n_maximal(); ++mp) {
            const Cone& c = maximal_cone(mp);
            const auto& sup = support_of(mp);
            for (std::size_t i = 0; i < rays.size(); ++i) {
                bool on = std::count(c.rays.begin(), c.rays.end(), rays[i]) > 0;
                Rat v = weights[i] - dot(sup, rays[i]);
                if (on && v != 0) throw std::logic_error("support functional inconsistent");
                if (!on && v <= 0)
                    throw std::invalid_argument("spec '" + id +
                                                "': marked parameter not interior (weight not strictly convex)");
            }
        }
    }
};

/// Weights scaled by d (the d-fold base-extension cone construction).
inline DegenerationSpec scale_weights(const DegenerationSpec& s, const Int& d) {
    std::vector<Rat> w = s.input_weights;
    for (auto& x : w) x *= Rat(d);
    return DegenerationSpec::build(s.id + "*" + d.str(), s.rank, s.input_rays, std::move(w), s.eta,
                                   s.tau_grid, s.rho);
}

namespace detail {

/// Coset representatives of Z^n / (lattice spanned by the columns of R),
/// R square nonsingular: x_y = U^{-1} y over y in prod [0, d_i), via U R V = D.
inline std::vector<LatticeVector> coset_representatives(const IntMatrix& R) {
    auto s = smith_normal_form(R);
    const std::size_t n = R.rows;
    // invert the unimodular U exactly over Q (entries are integers)
    RatMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) u(i, j) = Rat(s.U(i, j));
    std::vector<std::vector<Rat>> inv_cols;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<Rat> e(n, Rat(0));
        e[j] = 1;
        auto col = rat_solve(u, e);
        if (!col) throw std::logic_error("unimodular matrix not invertible");
        inv_cols.push_back(*col);
    }
    std::vector<Int> d(n);
    Int total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = s.D(i, i);
        if (d[i] == 0) throw std::invalid_argument("coset_representatives: singular matrix");
        total *= d[i];
    }
    std::vector<LatticeVector> reps;
    std::vector<Int> y(n, Int(0));
    for (Int count = 0; count < total; ++count) {
        LatticeVector x(n, Int(0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                Rat xi = inv_cols[j][i] * Rat(y[j]);
                if (rat_den(xi) != 1) throw std::logic_error("U^{-1} not integral");
                x[i] += rat_num(xi);
            }
        reps.push_back(std::move(x));
        std::size_t k = 0;
        while (k < n && y[k] == d[k] - 1) { y[k] = 0; ++k; }
        if (k < n) ++y[k];
    }
    return reps;
}

} // namespace detail

/// Simplicity of one maximal cone: the linear extension of w from the cone is
/// integer on every lattice point of the cone. Checked on the cone's rays and
/// on coset representatives of a full-rank ray subset (fundamental
/// parallelepiped of the ray matrix, via the Smith form).
inline bool simple_on_cone(const DegenerationSpec& s, std::size_t maximal_pos) {
    const Cone& c = s.maximal_cone(maximal_pos);
    const auto& sup = s.support_of(maximal_pos);
    for (const auto& m : c.rays)
        if (!is_integer(dot(sup, m))) return false;
    // pick rank-many independent rays
    std::vector<LatticeVector> basis;
    for (const auto& m : c.rays) {
        basis.push_back(m);
        if (lattice_rank(basis) != basis.size()) basis.pop_back();
        if (basis.size() == static_cast<std::size_t>(s.rank)) break;
    }
    if (basis.size() != static_cast<std::size_t>(s.rank))
        throw std::logic_error("maximal cone is not full-dimensional");
    IntMatrix R(s.rank, s.rank); // columns = basis rays
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (int i = 0; i < s.rank; ++i) R(static_cast<std::size_t>(i), j) = basis[j][static_cast<std::size_t>(i)];
    for (const auto& x : detail::coset_representatives(R))
        if (!is_integer(dot(sup, x))) return false;
    return true;
}

/// [w] is Z-valued on M iff every maximal cone passes the parallelepiped check.
inline bool is_simple(const DegenerationSpec& s) {
    if (!s.input_was_convex)
        throw std::invalid_argument("is_simple: convexify first (stored spec must be convex)");
    for (std::size_t mp = 0; mp < s.n_maximal(); ++mp)
        if (!simple_on_cone(s, mp)) return false;
    return true;
}

/// Smallest d >= 1 with is_simple after scaling all weights by d. Bounded by
/// the lcm of the support-functional denominators, so the search terminates.
inline Int minimal_base_extension(const DegenerationSpec& s) {
    Int bound = 1;
    for (const auto& sup : s.weight.support) bound = int_lcm(bound, denominator_lcm(sup));
    for (Int d = 1; d <= bound; ++d)
        if (is_simple(scale_weights(s, d))) return d;
    throw std::logic_error("minimal_base_extension: no d up to the denominator bound");
}

/// Multiplicity of the parameter along the divisor of a maximal cone:
/// index of the projected lattice of integer points of the lifted cone's span
/// inside M. Computed through the integer kernel of the row [q*c | -q] and
/// sublattice_index, where c is the cone's supporting functional with common
/// denominator q.
inline Int divisor_multiplicity(const DegenerationSpec& s, std::size_t maximal_pos) {
    if (maximal_pos >= s.n_maximal()) throw std::invalid_argument("divisor_multiplicity: not a maximal cone");
    const auto& sup = s.support_of(maximal_pos);
    Int q = denominator_lcm(sup);
    const std::size_t n = static_cast<std::size_t>(s.rank);
    IntMatrix A(1, n + 1);
    for (std::size_t j = 0; j < n; ++j) {
        Rat qc = Rat(q) * sup[j];
        A(0, j) = rat_num(qc);
    }
    A(0, n) = -q;
    auto kernel = integer_kernel(A); // rank n: the lattice {(x,k) : c.x = k}
    std::vector<LatticeVector> projected;
    for (const auto& v : kernel) projected.push_back(LatticeVector(v.begin(), v.begin() + n));
    return sublattice_index(projected);
}

struct StrataNode {
    std::size_t cone_index;
    int dim;              // = dim of the stratum = dim of the cone
    Int multiplicity = 0; // set for maximal nodes only
};

struct StrataPoset {
    std::vector<StrataNode> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> edges; // covering face relations (face, cone)
    std::map<int, std::size_t> census;                      // dim -> count
};

/// Stratification by torus orbits: one node per cone, graded by dimension,
/// Hasse edges along codimension-one face relations.
inline StrataPoset strata(const DegenerationSpec& s) {
    StrataPoset p;
    for (std::size_t i = 0; i < s.fan.cones.size(); ++i) {
        StrataNode node{i, s.fan.cones[i].rank, Int(0)};
        p.nodes.push_back(node);
        p.census[s.fan.cones[i].rank]++;
    }
    for (std::size_t mp = 0; mp < s.n_maximal(); ++mp)
        p.nodes[s.fan.maximal[mp]].multiplicity = divisor_multiplicity(s, mp);
    for (std::size_t i = 0; i < s.fan.cones.size(); ++i)
        for (std::size_t j = 0; j < s.fan.cones.size(); ++j) {
            const Cone& a = s.fan.cones[i];
            const Cone& b = s.fan.cones[j];
            if (a.rank + 1 != b.rank) continue;
            for (const auto& f : faces(b, a.rank))
                if (f.rays == a.rays) { p.edges.emplace_back(i, j); break; }
        }
    return p;
}

/// The monomial family {t^{w_m} z^m}. Fractional powers of t use the principal
/// branch of log t; every asymptotic quantity downstream depends on |t| only.
inline std::vector<std::complex<double>> monomial_family(const DegenerationSpec& s,
                                                         std::complex<double> t,
                                                         const std::vector<std::complex<double>>& z) {
    if (t == std::complex<double>(0.0, 0.0)) throw std::invalid_argument("monomial_family: t = 0");
    if (z.size() != static_cast<std::size_t>(s.rank)) throw std::invalid_argument("monomial_family: bad z size");
    for (const auto& zj : z)
        if (zj == std::complex<double>(0.0, 0.0)) throw std::invalid_argument("monomial_family: z_j = 0");
    std::vector<std::complex<double>> out;
    std::complex<double> logt = std::log(t); // principal branch
    for (std::size_t i = 0; i < s.rays.size(); ++i) {
        std::complex<double> acc = std::exp(logt * to_double(s.weights[i]));
        for (int j = 0; j < s.rank; ++j) {
            long e = s.rays[i][static_cast<std::size_t>(j)].convert_to<long>();
            acc *= std::pow(z[static_cast<std::size_t>(j)], static_cast<double>(e));
        }
        out.push_back(acc);
    }
    return out;
}

struct LambdaConstants {
    Rat lambda1;
    Rat lambda2;
    Rat lambda3; // extremal negative adjusted weight (0 when no admissible subset exists)
    Rat coeff_bound;
};

/// lambda2: sharp decay rate of the section norms; for each ray m express -m
/// over the rays of its minimal containing cone and take the largest
/// w_m + sum b_{m'} w_{m'}. lambda1 from the admissible-subset construction:
/// lambda3 the least (negative) adjusted weight over subsets not inside any
/// maximal cone, C the largest coefficient of the auxiliary functionals,
/// lambda1 = -lambda3 / (2C), with a documented fallback when no admissible
/// subset exists (every simplicial subset lies in a single maximal cone).
inline LambdaConstants lambda_constants(const DegenerationSpec& s) {
    LambdaConstants out;
    // lambda2
    bool first = true;
    for (std::size_t i = 0; i < s.rays.size(); ++i) {
        std::vector<Rat> neg(s.rays[i].size());
        for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = -Rat(s.rays[i][j]);
        auto loc = locate(s.fan, neg);
        const Cone& c = s.fan.cones[loc.cone_index];
        Rat lam = s.weights[i];
        for (std::size_t t = 0; t < c.rays.size(); ++t)
            lam += loc.coeffs[t] * s.weights[s.ray_index(c.rays[t])];
        if (first || lam > out.lambda2) { out.lambda2 = lam; first = false; }
    }

    // admissible subsets S': linearly independent, spanning a strongly convex
    // (simplicial) cone, not contained in any maximal cone's ray set
    const std::size_t n = static_cast<std::size_t>(s.rank);
    Rat lambda3 = 0; // max over admissible subsets of (negative) min adjusted weight
    bool have_admissible = false;
    Rat coeff = 1;
    for (std::size_t k = 2; k <= n && k <= s.rays.size(); ++k) {
        detail::subsets_of_size(s.rays.size(), k, [&](const std::vector<std::size_t>& idx) {
            std::vector<LatticeVector> sub;
            for (auto i : idx) sub.push_back(s.rays[i]);
            if (lattice_rank(sub) != k) return;
            for (std::size_t mp = 0; mp < s.n_maximal(); ++mp) {
                const Cone& c = s.maximal_cone(mp);
                bool inside = true;
                for (const auto& m : sub)
                    if (!std::count(c.rays.begin(), c.rays.end(), m)) { inside = false; break; }
                if (inside) return;
            }
            // canonical functional with l(m_i) = w_{m_i} on S', in the row space of S':
            // l = y^T S' with Gram(S') y = w|_{S'}
            RatMatrix G(k, k);
            std::vector<Rat> b(k);
            for (std::size_t a = 0; a < k; ++a) {
                b[a] = s.weights[idx[a]];
                for (std::size_t c2 = 0; c2 < k; ++c2) {
                    Rat g = 0;
                    for (std::size_t j = 0; j < n; ++j) g += Rat(sub[a][j]) * Rat(sub[c2][j]);
                    G(a, c2) = g;
                }
            }
            auto y = rat_solve(G, b);
            if (!y) return;
            std::vector<Rat> ell(n, Rat(0));
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t j = 0; j < n; ++j) ell[j] += (*y)[a] * Rat(sub[a][j]);
            Rat worst = 0;
            bool any = false;
            for (std::size_t i = 0; i < s.rays.size(); ++i) {
                if (std::count(idx.begin(), idx.end(), i)) continue;
                Rat adj = s.weights[i] - dot(ell, s.rays[i]);
                if (!any || adj < worst) { worst = adj; any = true; }
            }
            if (!any || worst >= 0) return; // cannot happen for admissible subsets of convex data
            if (!have_admissible || worst > lambda3) lambda3 = worst;
            have_admissible = true;
            // coefficient bound: the unit-valued functional on S' (l with l = 1 on S')
            std::vector<Rat> ones(k, Rat(1));
            auto y1 = rat_solve(G, ones);
            if (y1) {
                std::vector<Rat> v(n, Rat(0));
                for (std::size_t a = 0; a < k; ++a)
                    for (std::size_t j = 0; j < n; ++j) v[j] += (*y1)[a] * Rat(sub[a][j]);
                for (std::size_t i = 0; i < s.rays.size(); ++i) {
                    Rat m = dot(v, s.rays[i]);
                    if (m < 0) m = -m;
                    if (m > coeff) coeff = m;
                }
            }
        });
    }
    out.lambda3 = have_admissible ? lambda3 : Rat(0);
    out.coeff_bound = coeff;
    if (have_admissible) {
        out.lambda1 = -lambda3 / (2 * coeff);
    } else {
        // no admissible subset: containment can only fail through near-ties of
        // opposite rays; half the sharp rate with a safety factor is canonical
        out.lambda1 = out.lambda2 / 4;
    }
    return out;
}

} // namespace tordeg
