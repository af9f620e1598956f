#include <catch2/catch_amalgamated.hpp>

#include "tordeg/fan.hpp"
#include "oracles.hpp"

#include <optional>
#include <random>
#include <set>

using namespace tordeg;

namespace {

LatticeVector lv(std::initializer_list<long> xs) {
    LatticeVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

std::vector<Rat> rv(std::initializer_list<long> xs) {
    std::vector<Rat> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

// paper example (2): rays and weights of z1 z2 = t, z3 z4 = t z1
const std::vector<LatticeVector> ex2_rays = {lv({1, 0}), lv({-1, 0}), lv({0, 1}), lv({1, -1})};
const std::vector<Rat> ex2_w = rv({0, 1, 0, 1});

// paper example (1): z1 z2 = z3 z4 = t (product of two node degenerations)
const std::vector<LatticeVector> ex1_rays = {lv({1, 0}), lv({-1, 0}), lv({0, 1}), lv({0, -1})};
const std::vector<Rat> ex1_w = rv({0, 1, 0, 1});

struct RandomSpec {
    std::vector<LatticeVector> rays;
    std::vector<Rat> weights;
};

// random complete-fan data: distinct primitive rays that positively span,
// verified against the hull oracle before use
std::optional<RandomSpec> random_spec(std::mt19937_64& rng, int n, int extra_rays) {
    std::uniform_int_distribution<int> entry(-2, 2);
    std::uniform_int_distribution<int> wnum(0, 4);
    std::uniform_int_distribution<int> wden(1, 2);
    RandomSpec s;
    std::set<LatticeVector> seen;
    auto push = [&](LatticeVector v) {
        if (is_zero(v)) return;
        v = primitivize(v);
        if (seen.insert(v).second) {
            s.rays.push_back(v);
            s.weights.emplace_back(Rat(wnum(rng), wden(rng)));
        }
    };
    // +-basis first so the rays positively span
    for (int j = 0; j < n; ++j) {
        LatticeVector e(n, Int(0));
        e[j] = 1;
        push(e);
        e[j] = -1;
        push(e);
    }
    for (int k = 0; k < extra_rays; ++k) {
        LatticeVector v(n);
        for (auto& x : v) x = entry(rng);
        push(v);
    }
    // reject data with no convex minorant (oracle detects unboundedness at 0
    // via any negative-weight positive circuit; build_fan would throw)
    for (std::size_t i = 0; i < s.rays.size(); ++i) {
        std::vector<Rat> x = to_rat(s.rays[i]);
        auto v = oracle::lower_hull_value(s.rays, s.weights, x);
        if (!v) return std::nullopt;
    }
    return s;
}

} // namespace

TEST_CASE("build_fan on the rank-1 two-ray data") {
    auto r = build_fan({lv({1}), lv({-1})}, rv({0, 1}));
    CHECK(r.convex);
    CHECK(r.fan.maximal.size() == 2);
    CHECK(r.fan.complete);
    CHECK(is_simplicial(r.fan));
}

TEST_CASE("build_fan on paper example (2)") {
    auto r = build_fan(ex2_rays, ex2_w);
    CHECK(r.convex);
    CHECK(r.fan.maximal.size() == 4);
    for (auto mi : r.fan.maximal) CHECK(r.fan.cones[mi].rays.size() == 2);
    CHECK(is_simplicial(r.fan));
}

TEST_CASE("build_fan detects a non-convex weight") {
    auto r = build_fan({lv({1, 0}), lv({0, 1}), lv({1, 1}), lv({-1, -1})}, rv({0, 0, 1, 1}));
    CHECK_FALSE(r.convex);
    REQUIRE(r.dropped.size() == 1);
    CHECK(r.dropped[0] == 2);
}

TEST_CASE("build_fan rejects bad input") {
    // duplicate ray, conflicting weights
    CHECK_THROWS(build_fan({lv({1}), lv({2})}, rv({0, 1})));
    // rays not positively spanning
    CHECK_THROWS(build_fan({lv({1, 0}), lv({0, 1})}, rv({0, 0})));
    // no convex minorant: +1 and -1 with total weight < 0
    CHECK_THROWS(build_fan({lv({1}), lv({-1})}, rv({0, -1})));
    // degenerate: linear weight, epigraph cone has a line
    CHECK_THROWS(build_fan({lv({1}), lv({-1})}, rv({0, 0})));
}

TEST_CASE("convexify drops exactly the non-hull ray") {
    auto r = convexify({lv({1, 0}), lv({0, 1}), lv({1, 1}), lv({-1, -1})}, rv({0, 0, 1, 1}));
    CHECK(r.changed);
    REQUIRE(r.rays.size() == 3);
    // f~(1,1) = 0: evaluate through the fan
    CHECK(pl_evaluate(r.fan, r.weight, {Rat(1), Rat(1)}) == Rat(0));
}

TEST_CASE("convexify leaves convex data unchanged") {
    auto r = convexify({lv({1}), lv({-1})}, rv({0, 1}));
    CHECK_FALSE(r.changed);
    CHECK(r.rays.size() == 2);
    auto r2 = convexify(ex2_rays, ex2_w);
    CHECK_FALSE(r2.changed);
    CHECK(r2.rays.size() == 4);
}

TEST_CASE("convexify then build_fan is convex (hull duality)") {
    auto r = convexify({lv({1, 0}), lv({0, 1}), lv({1, 1}), lv({-1, -1})}, rv({0, 0, 1, 1}));
    auto again = build_fan(r.rays, r.values);
    CHECK(again.convex);
}

TEST_CASE("faces of a quadrant cone") {
    Cone q = make_cone({lv({1, 0}), lv({0, 1})});
    auto f1 = faces(q, 1);
    REQUIRE(f1.size() == 2);
    auto f0 = faces(q, 0);
    REQUIRE(f0.size() == 1);
    CHECK(f0[0].is_origin());
    CHECK_THROWS(faces(q, 3));
}

TEST_CASE("face census of the quadrant fan (paper example 1)") {
    auto r = build_fan(ex1_rays, ex1_w);
    CHECK(r.fan.cones_of_dim(0).size() == 1);
    CHECK(r.fan.cones_of_dim(1).size() == 4);
    CHECK(r.fan.cones_of_dim(2).size() == 4);
}

TEST_CASE("locate finds the minimal containing cone") {
    auto r = build_fan(ex1_rays, ex1_w);
    {
        auto loc = locate(r.fan, lv({3, 5}));
        CHECK(r.fan.cones[loc.cone_index].rank == 2);
    }
    {
        auto loc = locate(r.fan, lv({1, 0}));
        CHECK(r.fan.cones[loc.cone_index].rank == 1);
        CHECK(r.fan.cones[loc.cone_index].rays[0] == lv({1, 0}));
    }
    auto r2 = build_fan(ex2_rays, ex2_w);
    auto loc = locate(r2.fan, lv({2, -1}));
    const Cone& c = r2.fan.cones[loc.cone_index];
    REQUIRE(c.rays.size() == 2);
    CHECK(std::count(c.rays.begin(), c.rays.end(), lv({1, -1})) == 1);
    CHECK(std::count(c.rays.begin(), c.rays.end(), lv({1, 0})) == 1);
    for (const auto& co : loc.coeffs) CHECK(co == Rat(1));
}

TEST_CASE("locate is consistent with faces") {
    auto r = build_fan(ex2_rays, ex2_w);
    for (auto mi : r.fan.maximal) {
        const Cone& c = r.fan.cones[mi];
        // positive combination of the cone's rays lands in (a face of) the cone
        std::vector<Rat> v(2, Rat(0));
        for (const auto& ray : c.rays)
            for (std::size_t j = 0; j < 2; ++j) v[j] += Rat(ray[j]) * 3;
        auto loc = locate(r.fan, v);
        auto back = cone_membership(c.rays, v);
        CHECK(back.has_value());
        (void)loc;
    }
}

TEST_CASE("is_simplicial: square pyramid base cone in rank 3") {
    Cone pyramid = make_cone({lv({1, 0, 1}), lv({0, 1, 1}), lv({-1, 0, 1}), lv({0, -1, 1})});
    CHECK(pyramid.rays.size() == 4);
    CHECK(pyramid.rank == 3);
    Fan f = fan_from_cones(3, {pyramid});
    CHECK_FALSE(is_simplicial(f));
    CHECK_FALSE(f.complete);
}

TEST_CASE("supporting functional is strict off its own cone") {
    for (const auto& [rays, w] : {std::pair{ex1_rays, ex1_w}, std::pair{ex2_rays, ex2_w}}) {
        auto r = build_fan(rays, w);
        for (std::size_t mp = 0; mp < r.fan.maximal.size(); ++mp) {
            const Cone& c = r.fan.cones[r.fan.maximal[mp]];
            const auto& sup = r.weight.support[mp];
            for (std::size_t i = 0; i < r.weight.rays.size(); ++i) {
                bool in_cone = std::count(c.rays.begin(), c.rays.end(), r.weight.rays[i]) > 0;
                Rat lin = dot(sup, r.weight.rays[i]);
                if (in_cone) CHECK(lin == r.weight.values[i]);
                else CHECK(lin < r.weight.values[i]);
            }
        }
    }
}

TEST_CASE("convexify agrees with the brute-force hull oracle on random data") {
    std::mt19937_64 rng(2024);
    int done = 0;
    while (done < 60) {
        std::uniform_int_distribution<int> nd(1, 3), extra(0, 3);
        int n = nd(rng);
        auto spec = random_spec(rng, n, extra(rng));
        if (!spec) continue;
        BuildFanResult r;
        try {
            r = build_fan(spec->rays, spec->weights);
        } catch (const std::invalid_argument&) {
            continue; // degenerate weight (not strictly convexifiable); oracle cannot see this
        }
        ++done;
        auto expect = oracle::hull_survivors(spec->rays, spec->weights);
        std::vector<std::size_t> got = r.surviving_inputs;
        std::sort(got.begin(), got.end());
        REQUIRE(got == expect);
        // spot-check the induced function against the oracle at lattice points
        std::uniform_int_distribution<int> coord(-4, 4);
        for (int s = 0; s < 5; ++s) {
            std::vector<Rat> x(n);
            for (auto& c : x) c = coord(rng);
            auto ov = oracle::lower_hull_value(spec->rays, spec->weights, x);
            REQUIRE(ov.has_value());
            CHECK(pl_evaluate(r.fan, r.weight, x) == *ov);
        }
    }
}
