#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparsetrace/polysys.hpp"

namespace sparsetrace {

struct TrackerConfig {
    double newton_tol = 1e-12;
    int max_newton_iters = 8;
    double initial_step = 0.05;
    double min_step = 1e-9;
    double step_expand = 1.5;
    double step_contract = 0.5;
    double torus_floor = 1e-14;
    double path_bound = 1e8;
    int jobs = 1;

    void validate() const;
};

enum class PathStatus { Success, Diverged, Singular, LeftTorus, StepUnderflow };

const char* to_string(PathStatus s);

struct PathOutcome {
    PathStatus status = PathStatus::StepUnderflow;
    std::optional<TorusPoint> end;
    int steps_taken = 0;
    double residual = 0.0;
    double cond_estimate = 0.0;

    bool success() const { return status == PathStatus::Success; }
};

// Newton iteration on a fixed system; used to validate and polish points.
PathOutcome newton_polish(const SparseSystem& f, const TorusPoint& start, const TrackerConfig& cfg);

PathOutcome track_segment(const SegmentFamily& family, const TorusPoint& start,
                          double from_t, double to_t, const TrackerConfig& cfg);

struct TrackSetResult {
    std::vector<PathOutcome> outcomes;
    std::vector<std::pair<int, int>> crossings;  // endpoint pairs closer than 1e-8

    bool all_success() const;
    std::vector<TorusPoint> endpoints() const;  // successful paths only, input order
};

TrackSetResult track_set(const SegmentFamily& family, const std::vector<TorusPoint>& starts,
                         double from_t, double to_t, const TrackerConfig& cfg);

using Permutation = std::vector<int>;

struct LoopResult {
    bool ok = false;
    Permutation permutation;
    int failed_paths = 0;
    std::string note;
};

// Tracks the fibre around a closed triangle through two systems that differ
// from `base` only on the coefficients indexed by b, then matches endpoints
// back to the fibre (nearest neighbour with a 0.1 ratio test).
LoopResult monodromy_loop(const SparseSystem& base, const SupportCollection& b,
                          const std::vector<TorusPoint>& fibre, std::uint64_t seed,
                          const TrackerConfig& cfg);

}  // namespace sparsetrace
