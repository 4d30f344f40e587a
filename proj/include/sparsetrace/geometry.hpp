#pragma once

#include <vector>

#include "sparsetrace/supports.hpp"

namespace sparsetrace {

// Supporting hyperplane normal.x <= offset_value holding for every point of
// the polytope, with equality on a (dim-1)-face. Normal is primitive integer.
struct Facet {
    std::vector<Int> normal;
    Int offset_value;
};

// Convex hull in vertex and halfspace representation. For input whose affine
// hull has deficient dimension the polytope is flagged degenerate; facets are
// then omitted and the volume is zero.
struct Polytope {
    int ambient_dim = 0;
    int dim = 0;
    std::vector<LatticePoint> vertices;  // extreme points, sorted
    std::vector<Facet> facets;           // full-dimensional case only

    bool degenerate() const { return dim < ambient_dim; }
};

Polytope convex_hull(const Support& a);

Rat euclidean_volume(const Polytope& p);

// Exact volume of the convex hull of an integer point set; zero when the
// affine hull is lower-dimensional.
Rat volume_of_points(int ambient_dim, const std::vector<LatticePoint>& pts);

int affine_rank(const std::vector<LatticePoint>& pts);

std::vector<LatticePoint> minkowski_sum_points(const std::vector<LatticePoint>& a,
                                               const std::vector<LatticePoint>& b);

}  // namespace sparsetrace
