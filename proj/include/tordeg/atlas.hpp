#pragma once

#include "tordeg/degeneration.hpp"

#include <map>
#include <string>
#include <vector>

namespace tordeg {

/// Incidence between two local toric models: `from` is a stratum whose closure
/// contains the (deeper) stratum `to`; ray_map sends each ray index of the
/// `from` chart to a ray index of the `to` chart.
struct AtlasIncidence {
    std::string from, to;
    std::vector<std::size_t> ray_map;
};

/// Toroidal atlas: named local toric models glued along incidences.
struct ToroidalAtlas {
    std::map<std::string, DegenerationSpec> charts;
    std::vector<AtlasIncidence> incidences;
};

struct AtlasViolation {
    std::string kind; // "injectivity" | "cocycle" | "weight"
    std::string detail;
};

struct AtlasReport {
    bool valid = true;
    std::vector<AtlasViolation> violations;
};

/// Checks injectivity of every ray map, the cocycle condition on every
/// composable chain, and that weights agree along the maps. Charts are
/// expected in the normalization where shared rays carry equal weights.
inline AtlasReport validate_atlas(const ToroidalAtlas& atlas) {
    if (atlas.charts.empty()) throw std::invalid_argument("validate_atlas: empty atlas");
    AtlasReport rep;
    auto chart = [&](const std::string& name) -> const DegenerationSpec& {
        auto it = atlas.charts.find(name);
        if (it == atlas.charts.end())
            throw std::invalid_argument("validate_atlas: dangling stratum name '" + name + "'");
        return it->second;
    };
    auto add = [&](std::string kind, std::string detail) {
        rep.valid = false;
        rep.violations.push_back({std::move(kind), std::move(detail)});
    };

    for (const auto& inc : atlas.incidences) {
        const auto& from = chart(inc.from);
        const auto& to = chart(inc.to);
        if (inc.ray_map.size() != from.rays.size()) {
            add("injectivity", inc.from + "->" + inc.to + ": map size != |Sigma_" + inc.from + "(1)|");
            continue;
        }
        std::vector<bool> hit(to.rays.size(), false);
        for (std::size_t i = 0; i < inc.ray_map.size(); ++i) {
            std::size_t j = inc.ray_map[i];
            if (j >= to.rays.size()) {
                add("injectivity", inc.from + "->" + inc.to + ": ray index out of range");
                continue;
            }
            if (hit[j]) add("injectivity", inc.from + "->" + inc.to + ": two rays map to index " +
                                               std::to_string(j));
            hit[j] = true;
            if (from.weights[i] != to.weights[j])
                add("weight", inc.from + "->" + inc.to + ": w mismatch on ray " + std::to_string(i) +
                                  " (" + format_rational(from.weights[i]) + " vs " +
                                  format_rational(to.weights[j]) + ")");
        }
    }

    // cocycle e_{pq'} = e_{qq'} o e_{pq} on every chain with all three maps present
    auto find_inc = [&](const std::string& a, const std::string& b) -> const AtlasIncidence* {
        for (const auto& inc : atlas.incidences)
            if (inc.from == a && inc.to == b) return &inc;
        return nullptr;
    };
    for (const auto& pq : atlas.incidences)
        for (const auto& qq : atlas.incidences) {
            if (qq.from != pq.to) continue;
            const AtlasIncidence* pq2 = find_inc(pq.from, qq.to);
            if (!pq2) continue;
            for (std::size_t i = 0; i < pq.ray_map.size(); ++i) {
                if (pq.ray_map[i] >= qq.ray_map.size() || i >= pq2->ray_map.size()) continue;
                std::size_t composed = qq.ray_map[pq.ray_map[i]];
                if (composed != pq2->ray_map[i])
                    add("cocycle", pq.from + "->" + pq.to + "->" + qq.to + ": ray " + std::to_string(i) +
                                       " maps to " + std::to_string(composed) + " but directly to " +
                                       std::to_string(pq2->ray_map[i]));
            }
        }
    return rep;
}

/// lcm of the per-chart minimal base extensions.
inline Int toroidal_min_extension(const ToroidalAtlas& atlas) {
    if (atlas.charts.empty()) throw std::invalid_argument("toroidal_min_extension: empty atlas");
    Int l = 1;
    for (const auto& [name, spec] : atlas.charts) l = int_lcm(l, minimal_base_extension(spec));
    return l;
}

} // namespace tordeg
