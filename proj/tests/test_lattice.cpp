#include <catch2/catch_amalgamated.hpp>

#include "tordeg/lattice.hpp"
#include "tordeg/ratlin.hpp"

#include <random>

using namespace tordeg;

namespace {

IntMatrix mat2(long a, long b, long c, long d) {
    IntMatrix m(2, 2);
    m(0, 0) = a; m(0, 1) = b; m(1, 0) = c; m(1, 1) = d;
    return m;
}

// Fundamental-parallelepiped point count, by brute force over the bounding box.
// Independent oracle for sublattice_index on square full-rank generator sets.
long parallelepiped_count(const std::vector<LatticeVector>& gens) {
    const std::size_t n = gens[0].size();
    long box = 0;
    for (const auto& g : gens) {
        long s = 0;
        for (const auto& x : g) s += static_cast<long>(abs(x).convert_to<long>());
        box += s;
    }
    std::vector<long> pt(n, -box);
    long count = 0;
    while (true) {
        // membership: pt = sum alpha_i g_i with alpha_i in [0,1)
        RatMatrix A(n, gens.size());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < gens.size(); ++j) A(i, j) = Rat(gens[j][i]);
        std::vector<Rat> b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = pt[i];
        auto sol = rat_solve(std::move(A), std::move(b));
        if (sol) {
            bool in = true;
            for (const auto& a : *sol)
                if (a < 0 || a >= 1) { in = false; break; }
            if (in) ++count;
        }
        std::size_t k = 0;
        while (k < n && pt[k] == box) { pt[k] = -box; ++k; }
        if (k == n) break;
        ++pt[k];
    }
    return count;
}

} // namespace

TEST_CASE("primitivize divides by the gcd and keeps orientation") {
    CHECK(primitivize({Int(2), Int(4)}) == LatticeVector{Int(1), Int(2)});
    CHECK(primitivize({Int(1), Int(0)}) == LatticeVector{Int(1), Int(0)});
    CHECK(primitivize({Int(-3), Int(6), Int(-9)}) == LatticeVector{Int(-1), Int(2), Int(-3)});
    CHECK_THROWS(primitivize({Int(0), Int(0)}));
}

TEST_CASE("primitivize is idempotent on random vectors") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int trial = 0; trial < 200; ++trial) {
        LatticeVector v(3);
        for (auto& x : v) x = d(rng);
        if (is_zero(v)) continue;
        auto p = primitivize(v);
        CHECK(primitivize(p) == p);
    }
}

TEST_CASE("smith normal form on the spec examples") {
    {
        auto s = smith_normal_form(IntMatrix::identity(2));
        CHECK(s.D == IntMatrix::identity(2));
    }
    {
        auto s = smith_normal_form(mat2(2, 0, 0, 3));
        CHECK(s.D(0, 0) == 1);
        CHECK(s.D(1, 1) == 6);
        CHECK(matmul(matmul(s.U, mat2(2, 0, 0, 3)), s.V) == s.D);
    }
    {
        auto s = smith_normal_form(mat2(1, 1, 0, 2));
        CHECK(s.D(0, 0) == 1);
        CHECK(s.D(1, 1) == 2);
        CHECK(matmul(matmul(s.U, mat2(1, 1, 0, 2)), s.V) == s.D);
    }
}

TEST_CASE("smith normal form properties on random small matrices") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> dim(1, 4), entry(-5, 5);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t r = dim(rng), c = dim(rng);
        IntMatrix A(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) A(i, j) = entry(rng);
        auto s = smith_normal_form(A);
        REQUIRE(matmul(matmul(s.U, A), s.V) == s.D);
        CHECK(abs(determinant(s.U)) == 1);
        CHECK(abs(determinant(s.V)) == 1);
        // diagonal, nonnegative, divisibility chain
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j) CHECK(s.D(i, j) == 0);
        for (std::size_t i = 0; i + 1 < std::min(r, c); ++i) {
            CHECK(s.D(i, i) >= 0);
            if (s.D(i + 1, i + 1) != 0) {
                REQUIRE(s.D(i, i) != 0);
                CHECK(s.D(i + 1, i + 1) % s.D(i, i) == 0);
            }
        }
    }
}

TEST_CASE("sublattice index examples") {
    CHECK(sublattice_index({{Int(1), Int(0)}, {Int(0), Int(1)}}) == 1);
    CHECK(sublattice_index({{Int(1), Int(0)}, {Int(1), Int(2)}}) == 2);
    CHECK(sublattice_index({LatticeVector{Int(2)}}) == 2);
    CHECK_THROWS(sublattice_index({}));
}

TEST_CASE("sublattice index agrees with parallelepiped point counting") {
    CHECK(parallelepiped_count({{Int(1), Int(0)}, {Int(1), Int(2)}}) == 2);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> entry(-3, 3);
    int done = 0;
    while (done < 25) {
        std::vector<LatticeVector> gens(2, LatticeVector(2));
        for (auto& g : gens)
            for (auto& x : g) x = entry(rng);
        IntMatrix m = IntMatrix::from_rows(gens);
        if (determinant(m) == 0) continue;
        ++done;
        CHECK(sublattice_index(gens) == Int(parallelepiped_count(gens)));
    }
}

TEST_CASE("sublattice index is invariant under unimodular change of generators") {
    std::vector<LatticeVector> gens = {{Int(2), Int(1)}, {Int(0), Int(3)}};
    Int before = sublattice_index(gens);
    // row operations: g0 += 2 g1, then swap
    std::vector<LatticeVector> gens2 = {{Int(2), Int(7)}, {Int(0), Int(3)}};
    std::swap(gens2[0], gens2[1]);
    CHECK(sublattice_index(gens2) == before);
}

TEST_CASE("integer kernel of a 1-row matrix") {
    IntMatrix A(1, 3);
    A(0, 0) = 2; A(0, 1) = -4; A(0, 2) = 6;
    auto basis = integer_kernel(A);
    REQUIRE(basis.size() == 2);
    for (const auto& v : basis) {
        Int s = 2 * v[0] - 4 * v[1] + 6 * v[2];
        CHECK(s == 0);
    }
}
