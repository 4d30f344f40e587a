#pragma once

#include "sparsetrace/geometry.hpp"
#include "sparsetrace/supports.hpp"

namespace sparsetrace {

// Normalized mixed volume of the convex hulls, the generic torus solution
// count. Inclusion-exclusion over Minkowski-sum volumes; ambient dimension
// capped at 4.
Int mixed_volume(const SupportCollection& c);

// Mixed volume of the subcollection indexed by `subset`, computed inside the
// saturation of its own difference lattice (so it equals the torus solution
// count of the square subsystem). Requires rank equal to the subset size.
Int relative_mixed_volume(const SupportCollection& c, const std::vector<int>& subset);

// Basis of span(L) intersected with Z^n for the lattice spanned by the
// given generators; columns of the returned matrix.
IMat saturation_basis(int ambient_dim, const std::vector<LatticePoint>& gens);

}  // namespace sparsetrace
