#pragma once

#include <string>

#include "sparsetrace/solver.hpp"

namespace sparsetrace {

struct TraceConfig {
    double rel_tol = 1e-6;
    // accept a candidate set certified externally instead of the offset
    // approximation
    bool b_certified = false;
    // run one-sided: skip the abundance precondition (pass becomes
    // inconclusive, fail stays definitive)
    bool allow_nonabundant = false;
    // certify Bernstein-genericity by a full solve even when |S| < MV
    bool full_solve_check = false;
    TrackerConfig tracker;
};

struct TraceReport {
    std::string algorithm;
    std::vector<std::pair<double, Cx>> samples;  // (t, first-coordinate trace)
    double collinearity_residual = 0.0;
    bool pass = false;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::string genericity_mode;
    std::vector<std::string> notes;
    std::vector<PathStatus> path_statuses;
};

// Compensated coordinate sum over the chosen coordinate.
Cx trace(const std::vector<TorusPoint>& s, int coord = 0);
Cx centroid_coord(const std::vector<TorusPoint>& s, int coord = 0);

// Relative midpoint test for the samples at t = 0, 1/2, 1.
std::pair<bool, double> collinear(Cx p0, Cx ph, Cx p1, double rel_tol = 1e-6);

// Decides whether s is the complete torus solution set of f by perturbing
// the coefficients on b and testing that the trace moves along a line.
TraceReport sparse_trace_test(const SupportCollection& c, const SparseSystem& f,
                              const std::vector<TorusPoint>& s, const SupportCollection& b,
                              std::uint64_t seed, const TraceConfig& cfg);

// Variant for coefficient sets that do not enter the trace formula: the
// trace must stay constant.
TraceReport constant_sparse_trace_test(const SupportCollection& c, const SparseSystem& f,
                                       const std::vector<TorusPoint>& s, const SupportCollection& b,
                                       std::uint64_t seed, const TraceConfig& cfg);

enum class LinearityClass { Constant, AffineLinear, Nonlinear };
const char* to_string(LinearityClass c);

struct LinearityProbeReport {
    LinearityClass classification = LinearityClass::Nonlinear;
    std::vector<std::pair<double, Cx>> samples;
    double max_first_divided = 0.0;
    double max_second_divided = 0.0;
    double scale = 1.0;
};

// Samples the trace of the full solution set along a coefficient ray
// supported on perturb_set and classifies the dependence by divided
// differences.
LinearityProbeReport linearity_probe(const SupportCollection& c, const SparseSystem& f,
                                     const SupportCollection& perturb_set, int num_t,
                                     std::uint64_t seed, const TraceConfig& cfg);

struct LacunaryTraceReport {
    bool e1_in_lattice = false;
    Int index = 0;
    Cx trace_full;
    Cx trace_reduced;       // zero when e1 is outside the lattice
    double rel_err = 0.0;   // against the predicted relation
    bool pass = false;
    bool fibre_subset_ok = false;  // one point per fibre carries 1/index of the trace
};

LacunaryTraceReport lacunary_trace_check(const SupportCollection& c, const SparseSystem& f,
                                         std::uint64_t seed, const TraceConfig& cfg);

struct TriangularTraceReport {
    std::vector<int> witness;
    Int mv_full = 0;
    Int mv_sub = 0;
    Cx trace_full;
    Cx trace_sub;
    double rel_err = 0.0;
    bool pass = false;
};

TriangularTraceReport triangular_trace_check(const SupportCollection& c, const SparseSystem& f,
                                             std::uint64_t seed, const TraceConfig& cfg,
                                             const std::vector<int>* witness = nullptr);

struct MonodromyReport {
    int loops_attempted = 0;
    int loops_succeeded = 0;
    int fibre_size = 0;
    bool transitive = false;
    bool two_transitive = false;
    bool transposition_seen = false;
    std::vector<Permutation> permutations;
};

// Samples permutations from random coefficient loops over b and reports the
// orbit structure of the generated action.
MonodromyReport monodromy_experiment(const SupportCollection& c, const SparseSystem& f,
                                     const SupportCollection& b, int num_loops,
                                     std::uint64_t seed, const TraceConfig& cfg);

}  // namespace sparsetrace
