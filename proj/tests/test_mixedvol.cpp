#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "sparsetrace/errors.hpp"
#include "sparsetrace/mixedvol.hpp"

using namespace sparsetrace;
using namespace sparsetrace::testing;

namespace {

SupportCollection random_square(Rng& rng, int n, int max_pts, long coord_range) {
    std::vector<Support> sup;
    for (int i = 0; i < n; ++i) {
        int count = 2 + static_cast<int>(rng.raw() % static_cast<unsigned>(max_pts - 1));
        std::set<std::vector<long>> seen;
        std::vector<LatticePoint> pts;
        for (int k = 0; k < count; ++k) {
            std::vector<long> c;
            for (int d = 0; d < n; ++d)
                c.push_back(static_cast<long>(rng.raw() % static_cast<unsigned>(coord_range + 1)));
            if (seen.insert(c).second) pts.emplace_back(std::vector<Int>(c.begin(), c.end()));
        }
        if (pts.empty()) pts.emplace_back(std::vector<Int>(static_cast<std::size_t>(n)));
        sup.emplace_back(n, std::move(pts));
    }
    return SupportCollection(n, std::move(sup));
}

}  // namespace

TEST_CASE("mixed volume of dilated simplices and truncations") {
    CHECK(mixed_volume(coll({simplex_points(2, 5), simplex_points(2, 5)})) == 25);

    // degree-4-and-5 band of the dilated simplex
    std::vector<LatticePoint> band;
    Support s5 = simplex_points(2, 5);
    for (const auto& p : s5.points()) {
        Int total = p.coords[0] + p.coords[1];
        if (total >= 4) band.push_back(p);
    }
    Support truncated(2, band);
    CHECK(mixed_volume(coll({truncated, truncated})) == 9);
}

TEST_CASE("mixed volume of rectangle pairs") {
    for (long k1 = 1; k1 <= 2; ++k1)
        for (long l1 = 1; l1 <= 2; ++l1)
            for (long k2 = 1; k2 <= 2; ++k2)
                for (long l2 = 1; l2 <= 2; ++l2)
                    CHECK(mixed_volume(coll({rectangle_points(k1, l1), rectangle_points(k2, l2)})) ==
                          k1 * l2 + k2 * l1);
}

TEST_CASE("mixed volumes of the fixture families") {
    CHECK(mixed_volume(load_collection("sample_supports.json")) == 17);
    CHECK(mixed_volume(load_collection("lacunary_reducible_supports.json")) == 4);
    CHECK(mixed_volume(load_collection("lacunary_zero_trace_supports.json")) == 12);
    CHECK(mixed_volume(load_collection("triangular_pair_supports.json")) == 4);
    CHECK(mixed_volume(load_collection("triangular_threefold_supports.json")) == 6);
}

TEST_CASE("mixed volume symmetry and invariance") {
    Rng rng(3);
    for (int trial = 0; trial < 12; ++trial) {
        SupportCollection c = random_square(rng, 2, 5, 3);
        Int mv = mixed_volume(c);
        SupportCollection swapped = coll({c[1], c[0]});
        CHECK(mixed_volume(swapped) == mv);
        LatticePoint shift{static_cast<long>(rng.raw() % 7) - 3,
                           static_cast<long>(rng.raw() % 7) - 3};
        SupportCollection moved = coll({c[0].translated(shift), c[1]});
        CHECK(mixed_volume(moved) == mv);
        // shear is unimodular
        IMat m(2, 2);
        m.at(0, 0) = 1;
        m.at(0, 1) = 1;
        m.at(1, 0) = 0;
        m.at(1, 1) = 1;
        MonomialMap shear{m, 1};
        CHECK(mixed_volume(shear.apply(c)) == mv);
    }
}

TEST_CASE("positivity criterion agrees with the mixed volume") {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng.raw() % 2);
        SupportCollection c = random_square(rng, n, n == 2 ? 6 : 4, n == 2 ? 3 : 2);
        CHECK(has_positive_mixed_volume_by_defect(c) == (mixed_volume(c) > 0));
    }
}

TEST_CASE("support growth cannot shrink the mixed volume") {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        SupportCollection c = random_square(rng, 2, 4, 3);
        Int mv = mixed_volume(c);
        std::vector<LatticePoint> grown = c[0].points();
        LatticePoint extra{static_cast<long>(rng.raw() % 4), static_cast<long>(rng.raw() % 4)};
        if (!c[0].contains(extra)) grown.push_back(extra);
        SupportCollection bigger = coll({Support(2, grown), c[1]});
        CHECK(mixed_volume(bigger) >= mv);
    }
}

TEST_CASE("relative mixed volume inside the witness lattice") {
    SupportCollection tri = load_collection("triangular_pair_supports.json");
    CHECK(relative_mixed_volume(tri, {0}) == 2);
    CHECK(relative_mixed_volume(tri, {0, 1}) == mixed_volume(tri));

    SupportCollection threefold = load_collection("triangular_threefold_supports.json");
    CHECK(relative_mixed_volume(threefold, {1, 2}) == 2);
    CHECK(mixed_volume(threefold) == 3 * relative_mixed_volume(threefold, {1, 2}));

    CHECK_THROWS_AS(relative_mixed_volume(tri, {1}), PreconditionError);  // rank 2 subset of size 1
}

TEST_CASE("capacity and squareness guards") {
    CHECK_THROWS_AS(mixed_volume(SupportCollection(2, {simplex_points(2, 1)})), PreconditionError);
    std::vector<Support> five;
    std::vector<LatticePoint> pts;
    for (int i = 0; i < 5; ++i) {
        std::vector<Int> z(5);
        std::vector<Int> e(5);
        e[static_cast<std::size_t>(i)] = 1;
        if (pts.empty()) pts.emplace_back(std::move(z));
        pts.emplace_back(std::move(e));
    }
    for (int i = 0; i < 5; ++i) five.emplace_back(5, pts);
    CHECK_THROWS_AS(mixed_volume(SupportCollection(5, five)), CapacityError);
}
