#include "sparsetrace/mixedvol.hpp"

#include <algorithm>

#include "sparsetrace/errors.hpp"

namespace sparsetrace {

Int mixed_volume(const SupportCollection& c) {
    if (!c.square()) throw PreconditionError("mixed volume needs a square collection");
    int n = c.ambient_dim();
    if (n < 1) throw PreconditionError("mixed volume needs dimension >= 1");
    if (n > 4) throw CapacityError("mixed volume capped at dimension 4");
    for (const auto& s : c.supports())
        if (s.size() == 0) throw PreconditionError("mixed volume of empty support");

    std::vector<std::vector<LatticePoint>> verts;
    verts.reserve(static_cast<std::size_t>(n));
    for (const auto& s : c.supports()) verts.push_back(convex_hull(s).vertices);

    Rat acc = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<LatticePoint> sum;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            sum = sum.empty() ? verts[static_cast<std::size_t>(i)]
                              : minkowski_sum_points(sum, verts[static_cast<std::size_t>(i)]);
        }
        Rat vol = volume_of_points(n, sum);
        int popcount = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) ++popcount;
        if ((n - popcount) % 2 == 0)
            acc += vol;
        else
            acc -= vol;
    }
    if (denominator(acc) != 1 || acc < 0)
        throw std::logic_error("mixed volume must be a nonnegative integer");
    return numerator(acc);
}

IMat saturation_basis(int ambient_dim, const std::vector<LatticePoint>& gens) {
    IMat g(ambient_dim, static_cast<int>(gens.size()));
    for (int j = 0; j < g.cols; ++j)
        for (int i = 0; i < ambient_dim; ++i)
            g.at(i, j) = gens[static_cast<std::size_t>(j)].coords[static_cast<std::size_t>(i)];
    Snf s = smith_normal_form(g);
    // columns of u^-1 paired with nonzero invariant factors span the
    // saturation (the diagonal scales drop out)
    IMat uinv = inverse_unimodular(s.u);
    IMat out(ambient_dim, s.rank);
    for (int j = 0; j < s.rank; ++j)
        for (int i = 0; i < ambient_dim; ++i) out.at(i, j) = uinv.at(i, j);
    return out;
}

Int relative_mixed_volume(const SupportCollection& c, const std::vector<int>& subset) {
    if (subset.empty()) throw PreconditionError("relative mixed volume of empty subset");
    std::vector<int> idx = subset;
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw PreconditionError("duplicate index in subset");
    for (int i : idx)
        if (i < 0 || i >= c.count()) throw PreconditionError("subset index out of range");

    int r = static_cast<int>(idx.size());
    std::vector<LatticePoint> gens;
    std::vector<Support> shifted;
    for (int i : idx) {
        const Support& s = c[i];
        if (s.size() == 0) throw PreconditionError("empty support in subset");
        Support t = s.translated(LatticePoint(std::vector<Int>(s.ambient_dim())) - s.points().front());
        shifted.push_back(t);
        for (const auto& p : t.points()) gens.push_back(p);
    }
    SublatticeInfo lat = sublattice_of_generators(c.ambient_dim(), gens);
    if (lat.rank != r)
        throw PreconditionError("subset lattice rank does not match subset size");

    IMat sat = saturation_basis(c.ambient_dim(), gens);
    std::vector<Support> mapped;
    for (const auto& s : shifted) {
        std::vector<LatticePoint> pts;
        for (const auto& p : s.points()) {
            auto x = solve_integral(sat, p.coords);
            if (!x) throw std::logic_error("support point outside its saturation");
            pts.emplace_back(*x);
        }
        mapped.emplace_back(r, std::move(pts));
    }
    return mixed_volume(SupportCollection(r, std::move(mapped)));
}

}  // namespace sparsetrace
