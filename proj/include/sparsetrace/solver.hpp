#pragma once

#include "sparsetrace/mixedvol.hpp"
#include "sparsetrace/tracker.hpp"

namespace sparsetrace {

struct SolutionSet {
    std::vector<TorusPoint> points;
    std::vector<double> residuals;
    std::vector<double> cond_estimates;
    int certified_count = 0;
    Int mv = 0;
    bool possibly_incomplete = false;
    bool multiplicity_flag = false;
    int failed_paths = 0;
};

// Complete torus solution set of a small square system via a total-degree
// homotopy from gamma * (x_i^{d_i} - 1). Excess paths diverge or leave the
// torus and are filtered; endpoints are polished and deduplicated.
SolutionSet solve_torus(const SparseSystem& f, std::uint64_t seed, const TrackerConfig& cfg);

// True when the solve found exactly MV points, all with well-conditioned
// Jacobians.
bool is_bernstein_generic(const SparseSystem& f, const SolutionSet& solved,
                          const TrackerConfig& cfg);

}  // namespace sparsetrace
