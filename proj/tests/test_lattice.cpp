#include <doctest.h>

#include "sparsetrace/lattice.hpp"
#include "sparsetrace/numeric.hpp"

using namespace sparsetrace;

namespace {

IMat from_cols(int rows, std::vector<std::vector<long>> cols) {
    IMat m(rows, static_cast<int>(cols.size()));
    for (int c = 0; c < m.cols; ++c)
        for (int r = 0; r < rows; ++r) m.at(r, c) = cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
    return m;
}

}  // namespace

TEST_CASE("determinant by fraction-free elimination") {
    CHECK(determinant(IMat::identity(3)) == 1);
    IMat m = from_cols(2, {{2, 0}, {1, 1}});
    CHECK(determinant(m) == 2);
    IMat s = from_cols(3, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
    CHECK(determinant(s) == 0);
    IMat r = from_cols(3, {{3, -1, 2}, {0, 4, 1}, {5, 2, -2}});
    CHECK(determinant(r) == -75);  // cofactor expansion by hand
}

TEST_CASE("hermite normal form is a canonical column echelon basis") {
    // generators (2,0),(1,1) of the index-2 even-sum lattice
    IMat g = from_cols(2, {{2, 0}, {1, 1}});
    Hnf h = hermite_normal_form(g);
    REQUIRE(h.basis.cols == 2);
    CHECK(h.basis.at(0, 0) == 1);
    CHECK(h.basis.at(1, 0) == 1);
    CHECK(h.basis.at(0, 1) == 0);
    CHECK(h.basis.at(1, 1) == 2);
    CHECK(h.pivot_rows == std::vector<int>{0, 1});

    // redundant generators give the same basis
    IMat g2 = from_cols(2, {{2, 0}, {1, 1}, {3, 1}, {4, 0}});
    CHECK(hermite_normal_form(g2).basis == h.basis);
}

TEST_CASE("smith normal form produces divisor chain and transforms") {
    IMat m = from_cols(2, {{2, 0}, {0, 4}});
    Snf s = smith_normal_form(m);
    CHECK(s.rank == 2);
    CHECK(s.invariant_factors() == std::vector<Int>{Int(2), Int(4)});
    CHECK(mat_mul(mat_mul(s.u, m), s.v) == s.d);
    CHECK(abs(determinant(s.u)) == 1);
    CHECK(abs(determinant(s.v)) == 1);

    IMat r = from_cols(3, {{6, 4, 2}, {4, 4, 0}});
    Snf s2 = smith_normal_form(r);
    CHECK(mat_mul(mat_mul(s2.u, r), s2.v) == s2.d);
    for (std::size_t i = 1; i < s2.invariant_factors().size(); ++i)
        CHECK(s2.invariant_factors()[i] % s2.invariant_factors()[i - 1] == 0);
}

TEST_CASE("unimodular completion of a primitive vector") {
    Rng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng.raw() % 4);
        std::vector<Int> v(static_cast<std::size_t>(n));
        Int g = 0;
        for (auto& x : v) {
            x = static_cast<long>(rng.raw() % 19) - 9;
            g = gcd(g, x);
        }
        if (g == 0) {
            v[0] = 1;
            g = 1;
        }
        if (g > 1)
            for (auto& x : v) x /= g;
        IMat u = unimodular_with_first_column(v);
        CHECK(abs(determinant(u)) == 1);
        for (int i = 0; i < n; ++i) CHECK(u.at(i, 0) == v[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("rational and integral solving") {
    IMat m = from_cols(2, {{1, 1}, {0, 2}});
    auto x = solve_integral(m, {Int(3), Int(5)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 3);
    CHECK((*x)[1] == 1);
    CHECK(!solve_integral(m, {Int(0), Int(1)}).has_value());  // needs half
    auto r = solve_rational(m, {Rat(0), Rat(1)});
    REQUIRE(r.has_value());
    CHECK((*r)[1] == Rat(1, 2));
}

TEST_CASE("rational string round trip") {
    CHECK(rat_to_string(Rat(1, 2)) == "1/2");
    CHECK(rat_to_string(Rat(4)) == "4");
    CHECK(rat_from_string("-7/3") == Rat(-7, 3));
    CHECK(rat_from_string("12") == Rat(12));
}
