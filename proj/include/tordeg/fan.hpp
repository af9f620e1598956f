#pragma once

#include "tordeg/cone.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tordeg {

/// Complete fan in M (x) R together with the piecewise-linear weight that cut
/// it out. Cones are stored closed under taking faces, graded by dimension.
struct Fan {
    int rank = 0;
    std::vector<Cone> cones;              // all faces, deduplicated
    std::vector<std::size_t> maximal;     // indices into `cones` of the n-dim cones
    bool complete = false;

    const Cone& cone(std::size_t i) const { return cones[i]; }
    std::vector<std::size_t> cones_of_dim(int k) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < cones.size(); ++i)
            if (cones[i].rank == k) out.push_back(i);
        return out;
    }
};

/// Convex piecewise-linear function on a complete fan, given by per-ray values
/// plus the supporting linear functional of each maximal cone.
struct PLWeight {
    std::vector<LatticeVector> rays;       // the surviving ray set (fan's 1-skeleton order)
    std::vector<Rat> values;               // w_m per ray
    std::vector<std::vector<Rat>> support; // per maximal cone: c with c.m = w_m on that cone
    std::optional<std::size_t> normalized_against; // maximal-cone index, if normalized

    Rat value_of_ray(std::size_t i) const { return values[i]; }
};

struct BuildFanResult {
    Fan fan;
    PLWeight weight;
    bool convex = false;                       // every input ray on the lower hull at its weight
    std::vector<std::size_t> dropped;          // input indices strictly above the hull
    std::vector<std::size_t> non_extremal;     // on the hull but redundant in their facet cone
    std::vector<std::size_t> surviving_inputs; // input indices of weight.rays, in order
};

namespace detail {

struct HullFunctional {
    std::vector<Rat> c;
    std::vector<std::size_t> tight; // input ray indices with c.m == w_m
};

/// Enumerate the supporting linear functionals of the lower hull of the cone
/// over the lifted rays (m_i, w_i): all c with c.m_i <= w_i, tight on a
/// full-dimensional ray subset.
inline std::vector<HullFunctional> hull_functionals(const std::vector<LatticeVector>& rays,
                                                    const std::vector<Rat>& w) {
    const std::size_t n = rays.empty() ? 0 : rays[0].size();
    std::vector<HullFunctional> out;
    std::set<std::vector<Rat>> seen;
    subsets_of_size(rays.size(), n, [&](const std::vector<std::size_t>& idx) {
        RatMatrix A(n, n);
        std::vector<Rat> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) A(i, j) = Rat(rays[idx[i]][j]);
            b[i] = w[idx[i]];
        }
        if (rat_rank(A) != n) return;
        auto c = rat_solve(std::move(A), std::move(b));
        if (!c) return;
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (dot(*c, rays[i]) > w[i]) return;
        if (!seen.insert(*c).second) return;
        HullFunctional f;
        f.c = *c;
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (dot(f.c, rays[i]) == w[i]) f.tight.push_back(i);
        out.push_back(std::move(f));
    });
    return out;
}

inline std::string ray_to_string(const LatticeVector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].str();
    }
    return s + ")";
}

} // namespace detail

/// Closes a set of maximal cones under faces and checks the wall condition:
/// in a complete fan every facet of a maximal cone is shared by exactly one
/// other maximal cone.
inline Fan assemble_fan(int rank, const std::vector<Cone>& maximal_cones) {
    Fan fan;
    fan.rank = rank;
    std::map<std::vector<LatticeVector>, std::size_t> index_of;
    auto add = [&](const Cone& c) -> std::size_t {
        auto it = index_of.find(c.rays);
        if (it != index_of.end()) return it->second;
        fan.cones.push_back(c);
        index_of[c.rays] = fan.cones.size() - 1;
        return fan.cones.size() - 1;
    };
    for (const auto& mc : maximal_cones) {
        fan.maximal.push_back(add(mc));
        for (int k = 0; k < mc.rank; ++k)
            for (const auto& f : faces(mc, k)) add(f);
    }
    // wall pairing among maximal cones
    std::map<std::vector<LatticeVector>, int> wall_count;
    bool paired = true;
    for (auto mi : fan.maximal) {
        const Cone& mc = fan.cones[mi];
        for (const auto& w : faces(mc, mc.rank - 1)) wall_count[w.rays]++;
    }
    for (const auto& [rays, count] : wall_count)
        if (count != 2) paired = false;
    fan.complete = paired;
    return fan;
}

/// Assemble a (possibly non-complete) fan directly from its maximal cones.
inline Fan fan_from_cones(int rank, const std::vector<Cone>& maximal_cones) {
    return assemble_fan(rank, maximal_cones);
}

/// Lift each ray by its weight, take the lower convex hull over Q, and return
/// the projected fan of linearity domains with the induced convex PL function.
inline BuildFanResult build_fan(const std::vector<LatticeVector>& rays_in,
                                const std::vector<Rat>& weights_in) {
    if (rays_in.empty()) throw std::invalid_argument("build_fan: no rays");
    if (rays_in.size() != weights_in.size())
        throw std::invalid_argument("build_fan: rays/weights length mismatch");
    const std::size_t n = rays_in[0].size();
    if (n == 0) throw std::invalid_argument("build_fan: rank-0 ambient");

    // primitivize + dedupe; duplicate rays must carry one weight
    std::vector<LatticeVector> rays;
    std::vector<Rat> w;
    std::map<LatticeVector, std::size_t> at;
    std::vector<std::size_t> input_of; // surviving slot -> first input index
    for (std::size_t i = 0; i < rays_in.size(); ++i) {
        if (rays_in[i].size() != n) throw std::invalid_argument("build_fan: mixed dimensions");
        if (is_zero(rays_in[i])) throw std::invalid_argument("build_fan: zero ray");
        auto p = primitivize(rays_in[i]);
        auto it = at.find(p);
        if (it == at.end()) {
            at[p] = rays.size();
            rays.push_back(p);
            w.push_back(weights_in[i]);
            input_of.push_back(i);
        } else if (w[it->second] != weights_in[i]) {
            throw std::invalid_argument("build_fan: duplicate ray " + detail::ray_to_string(p) +
                                        " with conflicting weights");
        }
    }

    auto funcs = detail::hull_functionals(rays, w);
    if (funcs.empty())
        throw std::invalid_argument("build_fan: weight has no convex minorant (unbounded below) "
                                    "or rays do not span");

    // survivors: rays whose lifted point is a vertex of the lower hull, i.e.
    // extremal in the cone of the tight set of some functional
    std::vector<bool> on_hull(rays.size(), false), survivor(rays.size(), false);
    for (const auto& f : funcs)
        for (auto i : f.tight) on_hull[i] = true;
    std::vector<Cone> maximal_cones;
    std::vector<std::vector<Rat>> support;
    for (const auto& f : funcs) {
        std::vector<LatticeVector> tight_rays;
        for (auto i : f.tight) tight_rays.push_back(rays[i]);
        if (lattice_rank(tight_rays) != n) continue; // lower-dim tight set: not a maximal domain
        if (!is_strongly_convex(tight_rays))
            throw std::invalid_argument("build_fan: degenerate weight, a linearity domain contains "
                                        "a line (marked parameter not interior)");
        for (std::size_t t = 0; t < f.tight.size(); ++t)
            if (is_extremal_ray(tight_rays, t)) survivor[f.tight[t]] = true;
        Cone c;
        c.rays = extremal_rays(tight_rays);
        std::sort(c.rays.begin(), c.rays.end());
        c.rank = static_cast<int>(n);
        maximal_cones.push_back(std::move(c));
        support.push_back(f.c);
    }
    if (maximal_cones.empty())
        throw std::invalid_argument("build_fan: no full-dimensional linearity domain");

    BuildFanResult r;
    r.fan = assemble_fan(static_cast<int>(n), maximal_cones);
    if (!r.fan.complete) throw std::invalid_argument("fan not complete: rays do not positively span");
    // point-location sanity on the +-standard basis directions
    for (std::size_t j = 0; j < n; ++j)
        for (int sgn : {1, -1}) {
            std::vector<Rat> e(n, Rat(0));
            e[j] = sgn;
            bool covered = false;
            for (auto mi : r.fan.maximal)
                if (cone_membership(r.fan.cones[mi].rays, e)) { covered = true; break; }
            if (!covered) throw std::invalid_argument("fan not complete: basis direction uncovered");
        }

    // convex = every (deduplicated) input ray lies on the lower hull at its weight;
    // a hull ray that is redundant in its facet cone is reported but does not
    // spoil convexity (the induced function is unchanged)
    r.convex = true;
    for (std::size_t i = 0; i < rays.size(); ++i) {
        if (survivor[i]) r.surviving_inputs.push_back(input_of[i]);
        else if (on_hull[i]) r.non_extremal.push_back(input_of[i]);
        else { r.dropped.push_back(input_of[i]); r.convex = false; }
    }
    for (std::size_t i = 0; i < rays.size(); ++i) {
        if (!survivor[i]) continue;
        r.weight.rays.push_back(rays[i]);
        r.weight.values.push_back(w[i]);
    }
    r.weight.support = support; // aligned with maximal_cones == fan.maximal order
    if (rays.size() != rays_in.size()) {
        // deduplication happened; convexity verdict is about the deduplicated set
    }
    return r;
}

struct ConvexifyResult {
    std::vector<LatticeVector> rays; // surviving rays (the hull's ray set)
    std::vector<Rat> values;
    Fan fan;
    PLWeight weight;
    std::vector<std::size_t> dropped;      // input indices strictly above the hull
    std::vector<std::size_t> non_extremal; // input indices on the hull but redundant
    bool changed = false;
};

/// Largest convex PL minorant: keep exactly the rays generating the lower hull.
inline ConvexifyResult convexify(const std::vector<LatticeVector>& rays_in,
                                 const std::vector<Rat>& weights_in) {
    auto b = build_fan(rays_in, weights_in);
    ConvexifyResult r;
    r.rays = b.weight.rays;
    r.values = b.weight.values;
    r.fan = std::move(b.fan);
    r.weight = std::move(b.weight);
    r.dropped = b.dropped;
    r.non_extremal = b.non_extremal;
    r.changed = !b.convex;
    return r;
}

inline bool is_simplicial(const Fan& f) {
    for (auto mi : f.maximal)
        if (f.cones[mi].rays.size() != static_cast<std::size_t>(f.rank)) return false;
    return true;
}

struct LocateResult {
    std::size_t cone_index;  // minimal cone containing the point
    std::vector<Rat> coeffs; // nonnegative combination over that cone's rays
};

/// Minimal cone of the fan containing v.
inline LocateResult locate(const Fan& f, const std::vector<Rat>& v) {
    bool vzero = std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
    if (vzero) {
        for (std::size_t i = 0; i < f.cones.size(); ++i)
            if (f.cones[i].rank == 0) return {i, {}};
    }
    for (int k = 1; k <= f.rank; ++k) {
        for (std::size_t i = 0; i < f.cones.size(); ++i) {
            if (f.cones[i].rank != k) continue;
            auto c = cone_membership(f.cones[i].rays, v);
            if (c) return {i, *c};
        }
    }
    throw std::invalid_argument("locate: point not covered by the fan");
}

inline LocateResult locate(const Fan& f, const LatticeVector& v) { return locate(f, to_rat(v)); }

/// Evaluate the PL function at a point (locates the containing cone first).
inline Rat pl_evaluate(const Fan& f, const PLWeight& w, const std::vector<Rat>& v) {
    auto loc = locate(f, v);
    const Cone& c = f.cones[loc.cone_index];
    Rat val = 0;
    for (std::size_t t = 0; t < c.rays.size(); ++t) {
        if (loc.coeffs[t] == 0) continue;
        auto it = std::find(w.rays.begin(), w.rays.end(), c.rays[t]);
        if (it == w.rays.end()) throw std::logic_error("pl_evaluate: cone ray missing from weight");
        val += loc.coeffs[t] * w.values[static_cast<std::size_t>(it - w.rays.begin())];
    }
    return val;
}

/// w with the supporting functional of maximal cone `mc` subtracted:
/// zero on that cone's rays, strictly positive elsewhere for strictly convex w.
inline std::vector<Rat> normalize_against(const Fan& f, const PLWeight& w, std::size_t maximal_pos) {
    const auto& c = w.support.at(maximal_pos);
    std::vector<Rat> out(w.rays.size());
    for (std::size_t i = 0; i < w.rays.size(); ++i) out[i] = w.values[i] - dot(c, w.rays[i]);
    (void)f;
    return out;
}

} // namespace tordeg
