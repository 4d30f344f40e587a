#pragma once

#include <optional>
#include <vector>

#include "sparsetrace/numeric.hpp"

namespace sparsetrace {

// Dense integer matrix, column-major access through at(). All lattice code
// treats a matrix as the set of its columns.
struct IMat {
    int rows = 0;
    int cols = 0;
    std::vector<Int> a;

    IMat() = default;
    IMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    Int& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const Int& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static IMat identity(int n);
    std::vector<Int> col(int c) const;
    bool operator==(const IMat&) const = default;
};

IMat mat_mul(const IMat& lhs, const IMat& rhs);
std::vector<Int> mat_apply(const IMat& m, const std::vector<Int>& v);
Int determinant(const IMat& m);

// Exact inverse of a matrix with determinant +-1.
IMat inverse_unimodular(const IMat& u);

// Solve m*x = b over the rationals; nullopt when inconsistent or m singular
// on the relevant columns. m may be rectangular (least constraints solved
// exactly by elimination; a unique solution is required).
std::optional<std::vector<Rat>> solve_rational(const IMat& m, const std::vector<Rat>& b);
std::optional<std::vector<Int>> solve_integral(const IMat& m, const std::vector<Int>& b);

// Column-style Hermite normal form of the lattice generated by the columns
// of g: column echelon, positive pivots, entries left of a pivot reduced to
// [0, pivot). Deterministic column-operation order (Euclid on the two
// smallest nonzero entries of the working row, lowest column index first).
struct Hnf {
    IMat basis;                   // rows x rank
    std::vector<int> pivot_rows;  // strictly increasing
};
Hnf hermite_normal_form(const IMat& generators);

struct Snf {
    IMat d;  // diagonal, invariant factors k_1 | k_2 | ... on the diagonal
    IMat u;  // unimodular, u * m * v = d
    IMat v;
    int rank = 0;
    std::vector<Int> invariant_factors() const;
};
Snf smith_normal_form(const IMat& m);

// Unimodular matrix whose first column is the given primitive vector.
IMat unimodular_with_first_column(const std::vector<Int>& c);

}  // namespace sparsetrace
