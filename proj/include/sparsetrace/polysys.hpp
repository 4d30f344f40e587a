#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sparsetrace/supports.hpp"

namespace sparsetrace {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Point of the algebraic torus: every coordinate bounded away from zero.
struct TorusPoint {
    CVec x;

    TorusPoint() = default;
    explicit TorusPoint(CVec v) : x(std::move(v)) {}
    int dim() const { return static_cast<int>(x.size()); }
    bool in_torus(double floor = 1e-14) const;
};

// Laurent system identified with its coefficient vectors over a fixed
// support collection; coefficients align index-wise with the sorted points.
struct SparseSystem {
    SupportCollection collection;
    std::vector<CVec> coefficients;

    int equations() const { return collection.count(); }
    int vars() const { return collection.ambient_dim(); }
    bool square() const { return collection.square(); }
    void validate() const;
    bool zero_row(int i) const;
};

Cx ipow(Cx base, const Int& e);

CVec evaluate(const SparseSystem& f, const TorusPoint& p);
CMat jacobian(const SparseSystem& f, const TorusPoint& p);

// Per-equation sum of term magnitudes; the natural scale against which a
// residual is meaningfully small.
Eigen::VectorXd evaluation_scale(const SparseSystem& f, const TorusPoint& p);

// Decomposition into the part supported on b and the remainder, both over
// the full collection; the pieces sum back to f coefficient-exact.
std::pair<SparseSystem, SparseSystem> split(const SparseSystem& f, const SupportCollection& b);

// Replaces the coefficients indexed by b with samples from rng, leaving the
// rest untouched.
SparseSystem resample_on(const SparseSystem& f, const SupportCollection& b, Rng& rng);

SparseSystem random_system(const SupportCollection& c, std::uint64_t seed);

// Support points mapped by the matrix (or its inverse when pullback is set),
// coefficients carried unchanged. Non-integral images are rejected.
SparseSystem apply_monomial_map(const SparseSystem& f, const MonomialMap& map, bool pullback = false);

// Image of a torus point under the monomial map of `map`: coordinate i is
// x raised to the i-th column.
TorusPoint monomial_image(const MonomialMap& map, const TorusPoint& p);

// Straight-line pencil t*F + (1-t)*G over one shared collection, with an
// optional unit constant multiplying G for start-system deformations.
struct SegmentFamily {
    SparseSystem f;
    SparseSystem g;
    Cx gamma{1.0, 0.0};
    bool use_gamma = false;

    static SegmentFamily between(SparseSystem target, SparseSystem start);
    SparseSystem at(double t) const;
    CVec eval(double t, const TorusPoint& p) const;
    CMat jac(double t, const TorusPoint& p) const;
    CVec eval_dt(const TorusPoint& p) const;  // independent of t
};

}  // namespace sparsetrace
