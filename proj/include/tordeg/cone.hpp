#pragma once

#include "tordeg/lattice.hpp"
#include "tordeg/ratlin.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace tordeg {

/// Strongly convex rational polyhedral cone, stored by its extremal rays
/// (primitive, deduplicated). rank = dimension of the linear span.
struct Cone {
    std::vector<LatticeVector> rays;
    int rank = 0;

    std::size_t ambient_dim() const { return rays.empty() ? 0 : rays[0].size(); }
    bool is_origin() const { return rays.empty(); }
};

namespace detail {

inline void subsets_of_size(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == k) { fn(idx); return; }
        for (std::size_t i = start; i + (k - depth) <= n; ++i) {
            idx[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

} // namespace detail

/// Is v a nonnegative rational combination of the generators? By Caratheodory
/// it suffices to scan linearly independent subsets of size <= rank.
/// Returns the coefficients (relative to the full generator list) on success.
inline std::optional<std::vector<Rat>> cone_membership(const std::vector<LatticeVector>& gens,
                                                       const std::vector<Rat>& v) {
    bool vzero = std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
    if (vzero) return std::vector<Rat>(gens.size(), Rat(0));
    if (gens.empty()) return std::nullopt;
    const std::size_t maxk = std::min(gens.size(), v.size());
    std::optional<std::vector<Rat>> result;
    for (std::size_t k = 1; k <= maxk && !result; ++k) {
        detail::subsets_of_size(gens.size(), k, [&](const std::vector<std::size_t>& idx) {
            if (result) return;
            std::vector<std::vector<Rat>> cols;
            cols.reserve(k);
            for (auto i : idx) cols.push_back(to_rat(gens[i]));
            RatMatrix A = RatMatrix::from_columns(cols);
            if (rat_rank(A) != k) return; // dependent subset, a smaller one covers it
            auto sol = rat_solve(A, v);
            if (!sol) return;
            for (const auto& c : *sol)
                if (c < 0) return;
            std::vector<Rat> full(gens.size(), Rat(0));
            for (std::size_t t = 0; t < k; ++t) full[idx[t]] = (*sol)[t];
            result = std::move(full);
        });
    }
    return result;
}

inline std::optional<std::vector<Rat>> cone_membership(const std::vector<LatticeVector>& gens,
                                                       const LatticeVector& v) {
    return cone_membership(gens, to_rat(v));
}

/// True iff cone(gens) contains no line, i.e. no nontrivial nonnegative
/// circuit sums to zero. Scans minimal circuits (subsets of rank |S|-1).
inline bool is_strongly_convex(const std::vector<LatticeVector>& gens) {
    if (gens.empty()) return true;
    const std::size_t n = gens[0].size();
    const std::size_t maxk = std::min(gens.size(), n + 1);
    bool line = false;
    for (std::size_t k = 2; k <= maxk && !line; ++k) {
        detail::subsets_of_size(gens.size(), k, [&](const std::vector<std::size_t>& idx) {
            if (line) return;
            std::vector<LatticeVector> sub;
            for (auto i : idx) sub.push_back(gens[i]);
            RatMatrix m(n, k); // generators as columns: nullspace = circuit coefficients
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < n; ++j) m(j, i) = Rat(sub[i][j]);
            auto null = rat_nullspace(std::move(m)); // vectors lambda with sum lambda_i g_i = 0
            for (const auto& lam : null) {
                bool nonneg = true, nonpos = true;
                for (const auto& c : lam) {
                    if (c < 0) nonneg = false;
                    if (c > 0) nonpos = false;
                }
                if ((nonneg || nonpos) && !std::all_of(lam.begin(), lam.end(), [](const Rat& c) { return c == 0; }))
                    line = true;
            }
        });
    }
    return !line;
}

/// Ray gens[i] is extremal iff it is not a nonnegative combination of the others.
inline bool is_extremal_ray(const std::vector<LatticeVector>& gens, std::size_t i) {
    std::vector<LatticeVector> others;
    for (std::size_t j = 0; j < gens.size(); ++j)
        if (j != i) others.push_back(gens[j]);
    return !cone_membership(others, gens[i]).has_value();
}

/// Reduce a generator list to primitive, deduplicated, extremal rays.
inline std::vector<LatticeVector> extremal_rays(const std::vector<LatticeVector>& gens) {
    std::vector<LatticeVector> prim;
    std::set<LatticeVector> seen;
    for (const auto& g : gens) {
        if (is_zero(g)) continue;
        auto p = primitivize(g);
        if (seen.insert(p).second) prim.push_back(p);
    }
    std::vector<LatticeVector> out;
    for (std::size_t i = 0; i < prim.size(); ++i)
        if (is_extremal_ray(prim, i)) out.push_back(prim[i]);
    return out;
}

inline Cone make_cone(const std::vector<LatticeVector>& gens) {
    Cone c;
    c.rays = extremal_rays(gens);
    std::sort(c.rays.begin(), c.rays.end());
    c.rank = static_cast<int>(lattice_rank(c.rays));
    if (!is_strongly_convex(c.rays)) throw std::invalid_argument("cone is not strongly convex (contains a line)");
    return c;
}

inline bool same_cone(const Cone& a, const Cone& b) { return a.rays == b.rays; }

/// Facet data of a cone: outward-oriented supporting normal (u >= 0 on the
/// cone, = 0 exactly on the facet rays) together with the facet's ray indices.
struct ConeFacet {
    std::vector<Rat> normal;           // defined within span(cone)
    std::vector<std::size_t> ray_idx;  // rays lying on the facet
};

/// Enumerate the facets ((rank-1)-faces) of a strongly convex cone.
inline std::vector<ConeFacet> cone_facets(const Cone& c) {
    std::vector<ConeFacet> facets;
    if (c.rank <= 0) return facets;
    const std::size_t n = c.ambient_dim();
    if (c.rank == 1) {
        // single facet: the origin; supporting normal is any u with u*ray > 0
        ConeFacet f;
        f.normal = to_rat(c.rays[0]); // u = ray works within the span
        f.ray_idx = {};
        facets.push_back(std::move(f));
        return facets;
    }
    std::set<std::vector<std::size_t>> seen;
    const std::size_t k = static_cast<std::size_t>(c.rank) - 1;
    detail::subsets_of_size(c.rays.size(), k, [&](const std::vector<std::size_t>& idx) {
        std::vector<LatticeVector> sub;
        for (auto i : idx) sub.push_back(c.rays[i]);
        if (lattice_rank(sub) != k) return;
        // normal: u in span(cone), u orthogonal to sub. Solve in coordinates of span.
        // Build the matrix whose nullspace (within span) is the normal direction:
        // rows = sub vectors, plus rows spanning the orthogonal complement of span(cone).
        RatMatrix m(sub.size() + (n - c.rank), n);
        for (std::size_t i = 0; i < sub.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = Rat(sub[i][j]);
        // complement rows: nullspace of the full ray matrix gives vectors orthogonal
        // to u for u constrained to span(cone)^{**}; we instead constrain u to be a
        // combination of the cone's rays' span by requiring u orthogonal to the
        // complement of span. Compute complement basis once.
        RatMatrix rays_m(c.rays.size(), n);
        for (std::size_t i = 0; i < c.rays.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) rays_m(i, j) = Rat(c.rays[i][j]);
        auto comp = rat_nullspace(std::move(rays_m)); // vectors w with ray.w = 0
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) m(sub.size() + i, j) = comp[i][j];
        auto null = rat_nullspace(std::move(m));
        if (null.size() != 1) return; // not a hyperplane within the span
        std::vector<Rat> u = null[0];
        int pos = 0, neg = 0;
        std::vector<std::size_t> on;
        for (std::size_t i = 0; i < c.rays.size(); ++i) {
            Rat d = dot(u, c.rays[i]);
            if (d > 0) ++pos;
            else if (d < 0) ++neg;
            else on.push_back(i);
        }
        if (pos && neg) return; // not supporting
        if (neg) {
            for (auto& x : u) x = -x;
        }
        std::sort(on.begin(), on.end());
        if (lattice_rank([&] {
                std::vector<LatticeVector> s;
                for (auto i : on) s.push_back(c.rays[i]);
                return s;
            }()) != k)
            return;
        if (seen.insert(on).second) {
            ConeFacet f;
            f.normal = std::move(u);
            f.ray_idx = std::move(on);
            facets.push_back(std::move(f));
        }
    });
    return facets;
}

/// All k-dimensional faces of a strongly convex cone. Every proper face is an
/// intersection of facets, so we close the facet list under intersection.
inline std::vector<Cone> faces(const Cone& c, int k) {
    if (k < 0 || k > c.rank) throw std::invalid_argument("faces: k out of range");
    if (k == c.rank) return {c};
    if (k == 0) return {Cone{}};

    auto facets = cone_facets(c);
    // ray-subset representation of every face, BFS over facet intersections
    std::set<std::vector<std::size_t>> face_sets;
    std::vector<std::vector<std::size_t>> frontier;
    for (const auto& f : facets)
        if (face_sets.insert(f.ray_idx).second) frontier.push_back(f.ray_idx);
    while (!frontier.empty()) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& fs : frontier)
            for (const auto& f : facets) {
                std::vector<std::size_t> inter;
                std::set_intersection(fs.begin(), fs.end(), f.ray_idx.begin(), f.ray_idx.end(),
                                      std::back_inserter(inter));
                if (inter != fs && face_sets.insert(inter).second) next.push_back(inter);
            }
        frontier = std::move(next);
    }
    std::vector<Cone> out;
    std::set<std::vector<LatticeVector>> emitted;
    for (const auto& fs : face_sets) {
        std::vector<LatticeVector> rays;
        for (auto i : fs) rays.push_back(c.rays[i]);
        if (static_cast<int>(lattice_rank(rays)) != k) continue;
        Cone f;
        f.rays = rays;
        std::sort(f.rays.begin(), f.rays.end());
        f.rank = k;
        if (emitted.insert(f.rays).second) out.push_back(std::move(f));
    }
    return out;
}

} // namespace tordeg
