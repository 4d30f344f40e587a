#include <doctest.h>

#include "helpers.hpp"
#include "sparsetrace/errors.hpp"
#include "sparsetrace/polysys.hpp"

using namespace sparsetrace;
using namespace sparsetrace::testing;

namespace {

TorusPoint tp(std::initializer_list<Cx> vals) {
    CVec x(static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (Cx v : vals) x[i++] = v;
    return TorusPoint(x);
}

}  // namespace

TEST_CASE("evaluation of the sample systems at the all-ones point") {
    SparseSystem f = load_system("sample_system_f.json");
    CVec v = evaluate(f, tp({Cx(1, 0), Cx(1, 0)}));
    CHECK(v[0].real() == doctest::Approx(26.0).epsilon(1e-12));
    CHECK(v[1].real() == doctest::Approx(13.0).epsilon(1e-12));
    CHECK(std::abs(v[0].imag()) < 1e-14);
}

TEST_CASE("evaluation with negative exponents") {
    Support mono(2, {LatticePoint{3, -1}});
    SparseSystem f;
    f.collection = SupportCollection(2, {mono, mono});
    f.coefficients = {CVec::Ones(1), CVec::Zero(1)};
    CVec v = evaluate(f, tp({Cx(2, 0), Cx(3, 0)}));
    CHECK(v[0].real() == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    CHECK(v[1] == Cx(0, 0));
}

TEST_CASE("jacobian of a product monomial") {
    Support mono(2, {LatticePoint{1, 1}});
    SparseSystem f;
    f.collection = SupportCollection(2, {mono, mono});
    f.coefficients = {CVec::Ones(1), CVec::Ones(1)};
    CMat j = jacobian(f, tp({Cx(2, 0), Cx(3, 0)}));
    CHECK(j(0, 0).real() == doctest::Approx(3.0));
    CHECK(j(0, 1).real() == doctest::Approx(2.0));
}

TEST_CASE("jacobian matches central finite differences") {
    SparseSystem f = load_system("sample_system_f.json");
    Rng rng(77);
    TorusPoint p = tp({rng.annulus(), rng.annulus()});
    CMat j = jacobian(f, p);
    double h = 1e-7;
    for (int v = 0; v < 2; ++v) {
        CVec xp = p.x, xm = p.x;
        xp[v] += h;
        xm[v] -= h;
        CVec diff = (evaluate(f, TorusPoint(xp)) - evaluate(f, TorusPoint(xm))) / (2 * h);
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(diff[i] - j(i, v)) / std::max(1.0, std::abs(j(i, v))) < 1e-6);
    }
}

TEST_CASE("constant polynomial has a zero jacobian row") {
    Support constant(2, {LatticePoint{0, 0}});
    SparseSystem f;
    f.collection = SupportCollection(2, {constant, constant});
    f.coefficients = {CVec::Ones(1), CVec::Ones(1)};
    CMat j = jacobian(f, tp({Cx(2, 0), Cx(3, 0)}));
    CHECK(j.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("split decomposes and restores coefficients") {
    SparseSystem f = load_system("sample_system_f.json");
    SupportCollection all = f.collection;
    auto [on_all, none] = split(f, all);
    for (int i = 0; i < f.equations(); ++i) {
        CHECK(on_all.coefficients[static_cast<std::size_t>(i)] == f.coefficients[static_cast<std::size_t>(i)]);
        CHECK(none.coefficients[static_cast<std::size_t>(i)].cwiseAbs().maxCoeff() == 0.0);
    }

    SupportCollection empty(2, {Support(2, {}), Support(2, {})});
    auto [zero, rest] = split(f, empty);
    for (int i = 0; i < f.equations(); ++i) {
        CHECK(zero.coefficients[static_cast<std::size_t>(i)].cwiseAbs().maxCoeff() == 0.0);
        CHECK(rest.coefficients[static_cast<std::size_t>(i)] == f.coefficients[static_cast<std::size_t>(i)]);
    }

    SupportCollection tal = trace_affine_candidate(f.collection);
    auto [inside, outside] = split(f, tal);
    for (int i = 0; i < f.equations(); ++i)
        CHECK((inside.coefficients[static_cast<std::size_t>(i)] +
               outside.coefficients[static_cast<std::size_t>(i)] -
               f.coefficients[static_cast<std::size_t>(i)])
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
}

TEST_CASE("the two sample systems agree exactly off the affine candidate") {
    SparseSystem f = load_system("sample_system_f.json");
    SparseSystem g = load_system("sample_system_g.json");
    SupportCollection tal = trace_affine_candidate(f.collection);
    for (int i = 0; i < f.equations(); ++i) {
        const Support& s = f.collection[i];
        for (int j = 0; j < s.size(); ++j) {
            if (tal[i].contains(s.points()[static_cast<std::size_t>(j)])) continue;
            CHECK(f.coefficients[static_cast<std::size_t>(i)][j] ==
                  g.coefficients[static_cast<std::size_t>(i)][j]);
        }
    }
}

TEST_CASE("random systems are deterministic and land in the annulus") {
    SupportCollection c = load_collection("sample_supports.json");
    SparseSystem a = random_system(c, 99);
    SparseSystem b = random_system(c, 99);
    for (int i = 0; i < a.equations(); ++i)
        CHECK(a.coefficients[static_cast<std::size_t>(i)] == b.coefficients[static_cast<std::size_t>(i)]);
    CHECK(!(random_system(c, 100).coefficients[0] == a.coefficients[0]));

    Rng rng(1234);
    for (int k = 0; k < 1000; ++k) {
        double m = std::abs(rng.annulus());
        CHECK(m >= 0.5);
        CHECK(m <= 1.5);
    }
}

TEST_CASE("monomial maps on systems") {
    SparseSystem f = load_system("sample_system_f.json");
    MonomialMap identity{IMat::identity(2), 1};
    SparseSystem same = apply_monomial_map(f, identity);
    CHECK(same.collection == f.collection);
    for (int i = 0; i < 2; ++i)
        CHECK(same.coefficients[static_cast<std::size_t>(i)] == f.coefficients[static_cast<std::size_t>(i)]);

    // substitution x1 -> y1 y2^-2 shears the supports
    IMat shear(2, 2);
    shear.at(0, 0) = 1;
    shear.at(1, 0) = -2;
    shear.at(0, 1) = 0;
    shear.at(1, 1) = 1;
    MonomialMap sub{shear, 1};
    SparseSystem g = apply_monomial_map(f, sub);
    Rng rng(5);
    TorusPoint y = TorusPoint((CVec(2) << rng.annulus(), rng.annulus()).finished());
    TorusPoint x = monomial_image(sub, y);
    CVec lhs = evaluate(g, y);
    CVec rhs = evaluate(f, x);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(lhs[i] - rhs[i]) < 1e-10 * (1 + std::abs(rhs[i])));

    SparseSystem back = apply_monomial_map(g, sub, /*pullback=*/true);
    CHECK(back.collection == f.collection);
    for (int i = 0; i < 2; ++i)
        CHECK(back.coefficients[static_cast<std::size_t>(i)] == f.coefficients[static_cast<std::size_t>(i)]);
}

TEST_CASE("pullback rejects non-integral exponents") {
    SparseSystem f = load_system("sample_system_f.json");
    IMat two(2, 2);
    two.at(0, 0) = 2;
    two.at(1, 1) = 1;
    MonomialMap doubler{two, 2};
    CHECK_THROWS_AS(apply_monomial_map(f, doubler, true), PreconditionError);
}

TEST_CASE("reduced system evaluates through the square substitution") {
    // G(x1, x2^2) == F(x1, x2) for the reducible lacunary pair
    SupportCollection c = load_collection("lacunary_reducible_supports.json");
    SparseSystem f = random_system(c, 6);
    LacunaryReduction red = lacunary_reduction(c);
    SparseSystem g;
    g.collection = red.reduced;
    for (int i = 0; i < c.count(); ++i) {
        const Support& a = c[i];
        const Support& bsup = red.reduced[i];
        CVec coeff = CVec::Zero(bsup.size());
        for (int j = 0; j < a.size(); ++j) {
            LatticePoint q = a.points()[static_cast<std::size_t>(j)] -
                             red.translations[static_cast<std::size_t>(i)];
            coeff[bsup.index_of(*red.map.apply_inverse(q))] =
                f.coefficients[static_cast<std::size_t>(i)][j];
        }
        g.coefficients.push_back(coeff);
    }
    Rng rng(8);
    TorusPoint x = TorusPoint((CVec(2) << rng.annulus(), rng.annulus()).finished());
    TorusPoint y = monomial_image(red.map, x);  // (x1, x2^2)
    CHECK(std::abs(y.x[0] - x.x[0]) < 1e-15);
    CHECK(std::abs(y.x[1] - x.x[1] * x.x[1]) < 1e-15);
    CVec fx = evaluate(f, x);
    CVec gy = evaluate(g, y);
    // translations divide out monomial factors, so compare after rescaling
    for (int i = 0; i < 2; ++i) {
        Cx scale(1.0, 0.0);
        const LatticePoint& t = red.translations[static_cast<std::size_t>(i)];
        for (int v = 0; v < 2; ++v) scale *= ipow(x.x[v], t.coords[static_cast<std::size_t>(v)]);
        CHECK(std::abs(fx[i] - scale * gy[i]) < 1e-12 * (1 + std::abs(fx[i])));
    }
}

TEST_CASE("a coordinate change fixing the first axis preserves first coordinates") {
    SupportCollection c = coll({simplex_points(2, 2), simplex_points(2, 2)});
    SparseSystem f = random_system(c, 131);
    IMat m(2, 2);
    m.at(0, 0) = 1;
    m.at(1, 0) = 0;
    m.at(0, 1) = 3;
    m.at(1, 1) = 1;
    MonomialMap change{m, 1};
    SparseSystem g = apply_monomial_map(f, change, /*pullback=*/true);
    Rng rng(14);
    // solutions correspond through the monomial map with unchanged x1
    TorusPoint x = TorusPoint((CVec(2) << rng.annulus(), rng.annulus()).finished());
    TorusPoint y = monomial_image(change, x);
    CHECK(std::abs(y.x[0] - x.x[0]) == 0.0);
    CVec fx = evaluate(f, x);
    CVec gy = evaluate(g, y);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(fx[i] - gy[i]) < 1e-10 * (1 + std::abs(fx[i])));
}

TEST_CASE("segment family is linear in t") {
    SparseSystem f = load_system("sample_system_f.json");
    SparseSystem g = load_system("sample_system_g.json");
    SegmentFamily fam = SegmentFamily::between(f, g);
    Rng rng(17);
    TorusPoint p = TorusPoint((CVec(2) << rng.annulus(), rng.annulus()).finished());
    for (double t : {0.0, 0.25, 0.5, 1.0}) {
        CVec direct = fam.eval(t, p);
        CVec combo = t * evaluate(f, p) + (1 - t) * evaluate(g, p);
        CHECK((direct - combo).cwiseAbs().maxCoeff() < 1e-12);
        CVec at_sys = evaluate(fam.at(t), p);
        CHECK((direct - at_sys).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(fam.at(1.0).coefficients[0] == f.coefficients[0]);
    CHECK(fam.at(0.0).coefficients[1] == g.coefficients[1]);
}
