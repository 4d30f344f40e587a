#include <doctest.h>

#include "helpers.hpp"
#include "sparsetrace/errors.hpp"
#include "sparsetrace/tracetest.hpp"

using namespace sparsetrace;
using namespace sparsetrace::testing;

TEST_CASE("collinearity residuals") {
    auto [ok0, r0] = collinear(Cx(3.922, 0), Cx(1.672, 0), Cx(-0.578, 0));
    CHECK(ok0);
    CHECK(r0 < 1e-12);

    auto [ok1, r1] = collinear(Cx(-0.200, 0), Cx(-0.523, 0), Cx(-8.135, 0));
    CHECK(!ok1);
    CHECK(r1 > 0.1);

    auto [ok2, r2] = collinear(Cx(2, 1), Cx(2, 1), Cx(2, 1));
    CHECK(ok2);
    CHECK(r2 == 0.0);
}

TEST_CASE("trace is a compensated coordinate sum") {
    CVec a(2), b(2);
    a << Cx(1.5, 2.0), Cx(0, 0.1);
    b << Cx(-1.5, -2.0), Cx(0, 0.1);
    std::vector<TorusPoint> pair = {TorusPoint(a), TorusPoint(b)};
    CHECK(std::abs(trace(pair, 0)) < 1e-15);
    CHECK(std::abs(centroid_coord(pair, 0)) < 1e-15);
    CHECK(std::abs(trace(pair, 1) - Cx(0, 0.2)) < 1e-15);
    CHECK_THROWS_AS(trace({}, 0), PreconditionError);
}

TEST_CASE("sparse trace test on the sample system") {
    TrackerConfig tracker;
    TraceConfig cfg;
    SparseSystem f = load_system("sample_system_f.json");
    SolutionSet sol = solve_torus(f, 61, tracker);
    REQUIRE(sol.certified_count == 17);
    SupportCollection b = trace_affine_candidate(f.collection);

    SUBCASE("full solution set passes") {
        TraceReport rep = sparse_trace_test(f.collection, f, sol.points, b, 1, cfg);
        CHECK(rep.pass);
        CHECK(rep.genericity_mode == "full-by-count");
        REQUIRE(rep.samples.size() == 3);
    }

    SUBCASE("dropping one point fails") {
        std::vector<TorusPoint> subset(sol.points.begin(), sol.points.end() - 1);
        TraceReport rep = sparse_trace_test(f.collection, f, subset, b, 2, cfg);
        CHECK(!rep.pass);
    }

    SUBCASE("lacunary collections are rejected before any verdict") {
        SupportCollection lac = load_collection("lacunary_zero_trace_supports.json");
        SparseSystem fl = random_system(lac, 3);
        TrackerConfig tr;
        SolutionSet sl = solve_torus(fl, 3, tr);
        CHECK_THROWS_AS(
            sparse_trace_test(lac, fl, sl.points, lac, 3, cfg),
            PreconditionError);
    }

    SUBCASE("non-abundant perturbation sets are rejected unless waived") {
        SupportCollection inv = trace_invariant_candidate(f.collection);
        CHECK_THROWS_AS(sparse_trace_test(f.collection, f, sol.points, inv, 4, cfg),
                        PreconditionError);
        TraceConfig waived = cfg;
        waived.allow_nonabundant = true;
        TraceReport rep = constant_sparse_trace_test(f.collection, f, sol.points, inv, 4, waived);
        CHECK(rep.pass);
        CHECK(!rep.notes.empty());
    }
}

TEST_CASE("constant sparse trace test with an abundant invariant candidate") {
    TrackerConfig tracker;
    TraceConfig cfg;
    SupportCollection c = coll({simplex_points(2, 3), simplex_points(2, 3)});
    SparseSystem f = random_system(c, 71);
    SolutionSet sol = solve_torus(f, 71, tracker);
    REQUIRE(Int(sol.certified_count) == sol.mv);
    SupportCollection b = trace_invariant_candidate(c);
    REQUIRE(is_abundant(b));

    TraceReport pass_rep = constant_sparse_trace_test(c, f, sol.points, b, 1, cfg);
    CHECK(pass_rep.pass);

    std::vector<TorusPoint> subset(sol.points.begin(), sol.points.end() - 2);
    TraceReport fail_rep = constant_sparse_trace_test(c, f, subset, b, 1, cfg);
    CHECK(!fail_rep.pass);

    SupportCollection segment(2, {sup2({{0, 0}, {0, 1}}), sup2({{0, 0}, {0, 1}})});
    CHECK_THROWS_AS(constant_sparse_trace_test(c, f, sol.points, segment, 1, cfg),
                    PreconditionError);
}

TEST_CASE("trace test rejects sets beyond the candidate unless certified") {
    TrackerConfig tracker;
    TraceConfig cfg;
    SupportCollection c = coll({simplex_points(2, 2), simplex_points(2, 2)});
    SparseSystem f = random_system(c, 81);
    SolutionSet sol = solve_torus(f, 81, tracker);
    // the full support is abundant but not inside the affine candidate
    CHECK_THROWS_AS(sparse_trace_test(c, f, sol.points, c, 1, cfg), PreconditionError);
    TraceConfig certified = cfg;
    certified.b_certified = true;
    // with certification waived the run proceeds (and the full set still
    // passes only if the trace happens to move linearly; do not assert it)
    CHECK_NOTHROW(sparse_trace_test(c, f, sol.points, trace_affine_candidate(c), 1, certified));
}

TEST_CASE("linearity probe classifies the three coefficient regimes") {
    TraceConfig cfg;
    SupportCollection c = coll({simplex_points(2, 2), simplex_points(2, 2)});
    SparseSystem f = random_system(c, 91);

    LinearityProbeReport constant =
        linearity_probe(c, f, trace_invariant_candidate(c), 5, 1, cfg);
    CHECK(constant.classification == LinearityClass::Constant);

    LinearityProbeReport affine =
        linearity_probe(c, f, trace_affine_candidate(c), 5, 2, cfg);
    CHECK((affine.classification == LinearityClass::AffineLinear ||
           affine.classification == LinearityClass::Constant));

    SupportCollection corner(2, {sup2({{2, 0}}), Support(2, {})});
    LinearityProbeReport nonlinear = linearity_probe(c, f, corner, 5, 3, cfg);
    CHECK(nonlinear.classification == LinearityClass::Nonlinear);
}

TEST_CASE("lacunary trace laws") {
    TraceConfig cfg;

    SUBCASE("first unit vector outside the lattice forces a vanishing trace") {
        SupportCollection c = load_collection("lacunary_zero_trace_supports.json");
        SparseSystem f = random_system(c, 101);
        LacunaryTraceReport rep = lacunary_trace_check(c, f, 101, cfg);
        CHECK(!rep.e1_in_lattice);
        CHECK(rep.index == 2);
        CHECK(rep.pass);
        CHECK(rep.fibre_subset_ok);
        CHECK(std::abs(rep.trace_full) < 1e-6);
    }

    SUBCASE("index factor relation through the reduction") {
        SupportCollection c = load_collection("lacunary_reducible_supports.json");
        SparseSystem f = random_system(c, 102);
        LacunaryTraceReport rep = lacunary_trace_check(c, f, 102, cfg);
        CHECK(rep.e1_in_lattice);
        CHECK(rep.index == 2);
        CHECK(rep.pass);
        CHECK(rep.fibre_subset_ok);
    }

    SUBCASE("nonlacunary collections are rejected") {
        SupportCollection c = coll({simplex_points(2, 1), simplex_points(2, 1)});
        SparseSystem f = random_system(c, 103);
        CHECK_THROWS_AS(lacunary_trace_check(c, f, 103, cfg), PreconditionError);
    }
}

TEST_CASE("triangular trace laws") {
    TraceConfig cfg;

    SUBCASE("segment witness doubles the subsystem trace") {
        SupportCollection c = load_collection("triangular_pair_supports.json");
        SparseSystem f = random_system(c, 111);
        TriangularTraceReport rep = triangular_trace_check(c, f, 111, cfg);
        CHECK(rep.witness == std::vector<int>{0});
        CHECK(rep.mv_full == 4);
        CHECK(rep.mv_sub == 2);
        CHECK(rep.pass);
    }

    SUBCASE("threefold tower triples the planar trace") {
        SupportCollection c = load_collection("triangular_threefold_supports.json");
        SparseSystem f = random_system(c, 112);
        TriangularTraceReport rep = triangular_trace_check(c, f, 112, cfg);
        CHECK(rep.witness == std::vector<int>{1, 2});
        CHECK(rep.mv_full == 6);
        CHECK(rep.mv_sub == 2);
        CHECK(rep.pass);
    }

    SUBCASE("full witness collapses to the identity relation") {
        SupportCollection c = coll({simplex_points(2, 2), simplex_points(2, 2)});
        SparseSystem f = random_system(c, 113);
        std::vector<int> all = {0, 1};
        TriangularTraceReport rep = triangular_trace_check(c, f, 113, cfg, &all);
        CHECK(rep.pass);
        CHECK(rep.mv_full == rep.mv_sub);
    }

    SUBCASE("nontriangular collections are rejected") {
        SupportCollection c = coll({simplex_points(2, 2), simplex_points(2, 2)});
        SparseSystem f = random_system(c, 114);
        CHECK_THROWS_AS(triangular_trace_check(c, f, 114, cfg), PreconditionError);
    }
}

TEST_CASE("monodromy experiments at unit-test scale") {
    TraceConfig cfg;

    SUBCASE("nonlacunary pair acts fully on a small fibre") {
        SupportCollection c = coll({simplex_points(2, 2), simplex_points(2, 2)});
        SparseSystem f = random_system(c, 121);
        MonodromyReport rep = monodromy_experiment(c, f, trace_affine_candidate(c), 30, 121, cfg);
        CHECK(rep.fibre_size == 4);
        CHECK(rep.loops_succeeded > 20);
        CHECK(rep.transitive);
        CHECK(rep.two_transitive);
    }

    SUBCASE("lacunary pair is never 2-transitive") {
        SupportCollection c = load_collection("lacunary_reducible_supports.json");
        SparseSystem f = random_system(c, 122);
        MonodromyReport rep = monodromy_experiment(c, f, c, 30, 122, cfg);
        CHECK(rep.fibre_size == 4);
        CHECK(rep.loops_succeeded > 20);
        CHECK(!rep.two_transitive);
    }

    SUBCASE("single-point fibres are trivially full") {
        SupportCollection c = coll({simplex_points(2, 1), simplex_points(2, 1)});
        SparseSystem f = random_system(c, 123);
        MonodromyReport rep = monodromy_experiment(c, f, c, 5, 123, cfg);
        CHECK(rep.fibre_size == 1);
        CHECK(rep.transitive);
        CHECK(rep.two_transitive);
    }
}
