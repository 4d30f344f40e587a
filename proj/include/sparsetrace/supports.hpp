#pragma once

#include <optional>
#include <vector>

#include "sparsetrace/lattice.hpp"
#include "sparsetrace/numeric.hpp"

namespace sparsetrace {

// Exponent vector of a (Laurent) monomial.
struct LatticePoint {
    std::vector<Int> coords;

    LatticePoint() = default;
    explicit LatticePoint(std::vector<Int> c) : coords(std::move(c)) {}
    LatticePoint(std::initializer_list<long> c) {
        for (long v : c) coords.emplace_back(v);
    }
    int dim() const { return static_cast<int>(coords.size()); }
    auto operator<=>(const LatticePoint&) const = default;
};

LatticePoint operator+(const LatticePoint&, const LatticePoint&);
LatticePoint operator-(const LatticePoint&, const LatticePoint&);

// Finite set of exponent vectors; points kept sorted and unique so that
// coefficient vectors align with a canonical order.
class Support {
public:
    Support() = default;
    Support(int ambient_dim, std::vector<LatticePoint> pts);

    int ambient_dim() const { return ambient_dim_; }
    const std::vector<LatticePoint>& points() const { return points_; }
    int size() const { return static_cast<int>(points_.size()); }
    bool contains(const LatticePoint& p) const;
    int index_of(const LatticePoint& p) const;  // -1 when absent
    bool subset_of(const Support& other) const;
    Support translated(const LatticePoint& shift) const;
    // translation by minus the coordinate-wise minimum, so every coordinate
    // has minimum zero
    LatticePoint min_corner() const;
    bool operator==(const Support&) const = default;

private:
    int ambient_dim_ = 0;
    std::vector<LatticePoint> points_;
};

class SupportCollection {
public:
    SupportCollection() = default;
    SupportCollection(int ambient_dim, std::vector<Support> supports);

    int ambient_dim() const { return ambient_dim_; }
    const std::vector<Support>& supports() const { return supports_; }
    const Support& operator[](int i) const { return supports_[static_cast<std::size_t>(i)]; }
    int count() const { return static_cast<int>(supports_.size()); }
    bool square() const { return count() == ambient_dim_; }
    bool subset_of(const SupportCollection& other) const;
    bool operator==(const SupportCollection&) const = default;

private:
    int ambient_dim_ = 0;
    std::vector<Support> supports_;
};

// Basis and elementary divisors of a difference lattice. index is empty when
// the lattice has rank below the ambient dimension.
struct SublatticeInfo {
    IMat basis;  // ambient_dim x rank, Hermite-reduced columns
    int rank = 0;
    std::vector<Int> invariant_factors;
    std::optional<Int> index;

    bool contains(const LatticePoint& p) const;
    bool full_rank(int ambient_dim) const { return rank == ambient_dim; }
};

struct MonomialMap {
    IMat matrix;  // column j is the image of the j-th unit vector
    Int determinant;

    LatticePoint apply(const LatticePoint& p) const;
    std::optional<LatticePoint> apply_inverse(const LatticePoint& p) const;
    Support apply(const Support& s) const;
    SupportCollection apply(const SupportCollection& c) const;
};

SublatticeInfo difference_lattice(const Support& a);
SublatticeInfo collection_lattice(const SupportCollection& c);
SublatticeInfo sublattice_of_generators(int ambient_dim, const std::vector<LatticePoint>& gens);

// rank of the joined difference lattice over the index subset, minus the
// subset size
int defect(const SupportCollection& c, const std::vector<int>& subset);

// Minkowski's criterion: the mixed volume is positive iff no index subset
// has negative defect.
bool has_positive_mixed_volume_by_defect(const SupportCollection& c);

bool is_lacunary(const SupportCollection& c);
bool is_abundant(const SupportCollection& c);

// Least witness subset (lexicographic on the sorted index sequence) with
// rank equal to its size, or nullopt. Ambient dimension capped at 8.
std::optional<std::vector<int>> is_triangular(const SupportCollection& c);

struct LacunaryReduction {
    MonomialMap map;                      // map.apply(reduced) == translated input
    SupportCollection reduced;            // nonlacunary
    std::vector<LatticePoint> translations;  // recorded per-support shifts
};
LacunaryReduction lacunary_reduction(const SupportCollection& c);

// Largest t >= 0 with p + t*e_coord still inside the convex hull, computed
// by exact rational linear programming over the vertex representation.
Rat advance_distance(const Support& a, const LatticePoint& p, int coord);

// Points within first-coordinate distance k of the hull boundary in the
// +e_coord direction: { p in A : advance_distance(p) <= k }.
Support offset(const Support& a, const Rat& k, int coord = 0);
SupportCollection offset(const SupportCollection& c, const Rat& k, int coord = 0);

// Coordinate-wise complement A_i \ offset(A_i, 1/2): coefficients on which
// the first-coordinate trace moves affine-linearly.
SupportCollection trace_affine_candidate(const SupportCollection& c, int coord = 0);
// Coordinate-wise complement A_i \ offset(A_i, 1): coefficients absent from
// the trace formula.
SupportCollection trace_invariant_candidate(const SupportCollection& c, int coord = 0);

// Exact root of unity, the primitive order-th root raised to residue.
struct RootOfUnity {
    Int order;    // > 0
    Int residue;  // taken mod order
};

struct OmegaFilterResult {
    SupportCollection filtered;
    int nonempty_members = 0;
};

// Removes from each member the points alpha with omega^alpha == 1, i.e.
// those with sum_i residue_i * alpha_i / order_i integral.
OmegaFilterResult filter_by_root_of_unity(const SupportCollection& c,
                                          const std::vector<RootOfUnity>& omega);

std::vector<std::vector<int>> proper_nonempty_subsets_lex(int n);

}  // namespace sparsetrace
