#include "sparsetrace/supports.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "sparsetrace/errors.hpp"
#include "sparsetrace/simplex.hpp"

namespace sparsetrace {

LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint out = a;
    for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += b.coords[i];
    return out;
}

LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
    LatticePoint out = a;
    for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] -= b.coords[i];
    return out;
}

Support::Support(int ambient_dim, std::vector<LatticePoint> pts)
    : ambient_dim_(ambient_dim), points_(std::move(pts)) {
    for (const auto& p : points_)
        if (p.dim() != ambient_dim_)
            throw PreconditionError("support point dimension mismatch");
    std::sort(points_.begin(), points_.end());
    if (std::adjacent_find(points_.begin(), points_.end()) != points_.end())
        throw PreconditionError("duplicate support point");
}

bool Support::contains(const LatticePoint& p) const {
    return std::binary_search(points_.begin(), points_.end(), p);
}

int Support::index_of(const LatticePoint& p) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), p);
    if (it == points_.end() || *it != p) return -1;
    return static_cast<int>(it - points_.begin());
}

bool Support::subset_of(const Support& other) const {
    for (const auto& p : points_)
        if (!other.contains(p)) return false;
    return true;
}

Support Support::translated(const LatticePoint& shift) const {
    std::vector<LatticePoint> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) pts.push_back(p + shift);
    return Support(ambient_dim_, std::move(pts));
}

LatticePoint Support::min_corner() const {
    if (points_.empty()) return LatticePoint(std::vector<Int>(ambient_dim_));
    LatticePoint m = points_.front();
    for (const auto& p : points_)
        for (int i = 0; i < ambient_dim_; ++i) m.coords[i] = std::min(m.coords[i], p.coords[i]);
    return m;
}

SupportCollection::SupportCollection(int ambient_dim, std::vector<Support> supports)
    : ambient_dim_(ambient_dim), supports_(std::move(supports)) {
    for (const auto& s : supports_)
        if (s.ambient_dim() != ambient_dim_)
            throw PreconditionError("collection member dimension mismatch");
}

bool SupportCollection::subset_of(const SupportCollection& other) const {
    if (count() != other.count() || ambient_dim_ != other.ambient_dim()) return false;
    for (int i = 0; i < count(); ++i)
        if (!supports_[i].subset_of(other[i])) return false;
    return true;
}

bool SublatticeInfo::contains(const LatticePoint& p) const {
    if (rank == 0) {
        for (const auto& v : p.coords)
            if (v != 0) return false;
        return true;
    }
    return solve_integral(basis, p.coords).has_value();
}

LatticePoint MonomialMap::apply(const LatticePoint& p) const {
    return LatticePoint(mat_apply(matrix, p.coords));
}

std::optional<LatticePoint> MonomialMap::apply_inverse(const LatticePoint& p) const {
    auto x = solve_integral(matrix, p.coords);
    if (!x) return std::nullopt;
    return LatticePoint(*x);
}

Support MonomialMap::apply(const Support& s) const {
    std::vector<LatticePoint> pts;
    pts.reserve(s.points().size());
    for (const auto& p : s.points()) pts.push_back(apply(p));
    return Support(s.ambient_dim(), std::move(pts));
}

SupportCollection MonomialMap::apply(const SupportCollection& c) const {
    std::vector<Support> out;
    out.reserve(c.supports().size());
    for (const auto& s : c.supports()) out.push_back(apply(s));
    return SupportCollection(c.ambient_dim(), std::move(out));
}

SublatticeInfo sublattice_of_generators(int ambient_dim, const std::vector<LatticePoint>& gens) {
    IMat g(ambient_dim, static_cast<int>(gens.size()));
    for (int j = 0; j < g.cols; ++j)
        for (int i = 0; i < ambient_dim; ++i) g.at(i, j) = gens[static_cast<std::size_t>(j)].coords[static_cast<std::size_t>(i)];
    Hnf h = hermite_normal_form(g);
    SublatticeInfo info;
    info.basis = h.basis;
    info.rank = h.basis.cols;
    if (info.rank > 0) {
        Snf s = smith_normal_form(h.basis);
        info.invariant_factors = s.invariant_factors();
    }
    if (info.rank == ambient_dim) {
        Int idx = 1;
        for (const auto& f : info.invariant_factors) idx *= f;
        info.index = idx;
    }
    return info;
}

namespace {

void append_difference_generators(const Support& a, std::vector<LatticePoint>& gens) {
    if (a.size() <= 1) return;
    const auto& base = a.points().front();
    for (int i = 1; i < a.size(); ++i) gens.push_back(a.points()[static_cast<std::size_t>(i)] - base);
}

}  // namespace

SublatticeInfo difference_lattice(const Support& a) {
    if (a.size() == 0) throw PreconditionError("difference lattice of empty support");
    std::vector<LatticePoint> gens;
    append_difference_generators(a, gens);
    return sublattice_of_generators(a.ambient_dim(), gens);
}

SublatticeInfo collection_lattice(const SupportCollection& c) {
    if (c.count() == 0) throw PreconditionError("collection lattice of empty collection");
    std::vector<LatticePoint> gens;
    for (const auto& s : c.supports()) append_difference_generators(s, gens);
    return sublattice_of_generators(c.ambient_dim(), gens);
}

int defect(const SupportCollection& c, const std::vector<int>& subset) {
    if (subset.empty()) throw PreconditionError("defect of empty index subset");
    std::vector<LatticePoint> gens;
    for (int i : subset) {
        if (i < 0 || i >= c.count()) throw PreconditionError("defect: index out of range");
        append_difference_generators(c[i], gens);
    }
    SublatticeInfo info = sublattice_of_generators(c.ambient_dim(), gens);
    return info.rank - static_cast<int>(subset.size());
}

std::vector<std::vector<int>> proper_nonempty_subsets_lex(int n) {
    std::vector<std::vector<int>> subsets;
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) s.push_back(i);
        subsets.push_back(std::move(s));
    }
    std::sort(subsets.begin(), subsets.end());
    return subsets;
}

bool has_positive_mixed_volume_by_defect(const SupportCollection& c) {
    if (!c.square()) throw PreconditionError("defect criterion needs a square collection");
    int n = c.count();
    if (n > 8) throw CapacityError("defect criterion capped at 8 supports");
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) s.push_back(i);
        if (defect(c, s) < 0) return false;
    }
    return true;
}

bool is_lacunary(const SupportCollection& c) {
    if (c.count() == 0) throw PreconditionError("empty collection");
    SublatticeInfo info = collection_lattice(c);
    if (info.rank < c.ambient_dim()) return true;  // infinite index
    return *info.index > 1;
}

bool is_abundant(const SupportCollection& c) {
    for (const auto& s : c.supports()) {
        if (s.size() == 0) return false;
        if (difference_lattice(s).rank != c.ambient_dim()) return false;
    }
    return true;
}

std::optional<std::vector<int>> is_triangular(const SupportCollection& c) {
    if (!c.square()) throw PreconditionError("triangularity needs a square collection");
    int n = c.count();
    if (n > 8) throw CapacityError("triangularity search capped at dimension 8");
    for (const auto& s : proper_nonempty_subsets_lex(n)) {
        std::vector<LatticePoint> gens;
        for (int i : s) append_difference_generators(c[i], gens);
        if (sublattice_of_generators(n, gens).rank == static_cast<int>(s.size())) return s;
    }
    return std::nullopt;
}

LacunaryReduction lacunary_reduction(const SupportCollection& c) {
    if (!is_lacunary(c)) throw PreconditionError("collection is not lacunary");
    int n = c.ambient_dim();
    SublatticeInfo info = collection_lattice(c);
    if (info.rank < n)
        throw PreconditionError("rank-deficient collection lattice; no square reduction");

    std::vector<Int> e1(n);
    e1[0] = 1;
    std::vector<Int> target;
    if (auto x = solve_integral(info.basis, e1)) {
        target = *x;  // e1 is in the lattice; the reduction will fix it
    } else {
        std::vector<Rat> rb(e1.size());
        for (std::size_t i = 0; i < e1.size(); ++i) rb[i] = Rat(e1[i]);
        auto rx = solve_rational(info.basis, rb);
        if (!rx) throw PreconditionError("lattice basis is singular");
        Int k = 1;
        for (const auto& v : *rx) k = lcm(k, denominator(v));
        target.resize(rx->size());
        for (std::size_t i = 0; i < rx->size(); ++i)
            target[i] = numerator((*rx)[i]) * (k / denominator((*rx)[i]));
    }
    IMat completion = unimodular_with_first_column(target);
    IMat phi = mat_mul(info.basis, completion);
    Int det = determinant(phi);
    if (det < 0) {
        for (int r = 0; r < n; ++r) phi.at(r, n - 1) = -phi.at(r, n - 1);
        det = -det;
    }
    MonomialMap map{phi, det};

    LacunaryReduction out;
    std::vector<Support> reduced;
    for (const auto& s : c.supports()) {
        if (s.size() == 0) throw PreconditionError("empty support member");
        LatticePoint shift = s.points().front();  // lex-least point, makes 0 a member
        out.translations.push_back(shift);
        std::vector<LatticePoint> pts;
        for (const auto& p : s.points()) {
            auto q = map.apply_inverse(p - shift);
            if (!q) throw std::logic_error("reduction produced a non-integral exponent");
            pts.push_back(*q);
        }
        reduced.emplace_back(n, std::move(pts));
    }
    out.map = map;
    out.reduced = SupportCollection(n, std::move(reduced));
    return out;
}

Rat advance_distance(const Support& a, const LatticePoint& p, int coord) {
    if (a.size() == 0) throw PreconditionError("offset of empty support");
    if (coord < 0 || coord >= a.ambient_dim()) throw PreconditionError("offset: bad coordinate");
    int n = a.ambient_dim();
    int m = a.size();
    // variables: lambda_1..lambda_m, t; rows: n coordinate equations + sum(lambda)=1
    std::vector<std::vector<Rat>> A(static_cast<std::size_t>(n) + 1,
                                    std::vector<Rat>(static_cast<std::size_t>(m) + 1));
    std::vector<Rat> b(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) A[i][j] = Rat(a.points()[static_cast<std::size_t>(j)].coords[static_cast<std::size_t>(i)]);
        A[i][m] = (i == coord) ? Rat(-1) : Rat(0);
        b[i] = Rat(p.coords[static_cast<std::size_t>(i)]);
    }
    for (int j = 0; j < m; ++j) A[n][j] = Rat(1);
    b[n] = Rat(1);
    std::vector<Rat> c(static_cast<std::size_t>(m) + 1);
    c[m] = Rat(1);
    LpResult res = lp_maximize(A, b, c);
    if (res.status != LpResult::Status::Optimal)
        throw PreconditionError("offset: point not in the convex hull");
    return res.value;
}

Support offset(const Support& a, const Rat& k, int coord) {
    if (k < 0) throw PreconditionError("offset distance must be nonnegative");
    std::vector<LatticePoint> pts;
    for (const auto& p : a.points())
        if (advance_distance(a, p, coord) <= k) pts.push_back(p);
    return Support(a.ambient_dim(), std::move(pts));
}

SupportCollection offset(const SupportCollection& c, const Rat& k, int coord) {
    std::vector<Support> out;
    for (const auto& s : c.supports()) out.push_back(offset(s, k, coord));
    return SupportCollection(c.ambient_dim(), std::move(out));
}

namespace {

SupportCollection offset_complement(const SupportCollection& c, const Rat& k, int coord) {
    if (!c.square()) throw PreconditionError("candidate sets need a square collection");
    if (!has_positive_mixed_volume_by_defect(c))
        throw PreconditionError("candidate sets need positive mixed volume");
    std::vector<Support> out;
    for (const auto& s : c.supports()) {
        Support off = offset(s, k, coord);
        std::vector<LatticePoint> keep;
        for (const auto& p : s.points())
            if (!off.contains(p)) keep.push_back(p);
        out.emplace_back(c.ambient_dim(), std::move(keep));
    }
    return SupportCollection(c.ambient_dim(), std::move(out));
}

}  // namespace

SupportCollection trace_affine_candidate(const SupportCollection& c, int coord) {
    return offset_complement(c, Rat(1, 2), coord);
}

SupportCollection trace_invariant_candidate(const SupportCollection& c, int coord) {
    return offset_complement(c, Rat(1), coord);
}

OmegaFilterResult filter_by_root_of_unity(const SupportCollection& c,
                                          const std::vector<RootOfUnity>& omega) {
    if (static_cast<int>(omega.size()) != c.ambient_dim())
        throw PreconditionError("root-of-unity tuple length mismatch");
    Int big = 1;
    for (const auto& w : omega) {
        if (w.order <= 0) throw PreconditionError("root of unity with nonpositive order");
        big = lcm(big, w.order);
    }
    auto in_kernel = [&](const LatticePoint& p) {
        Int acc = 0;
        for (int i = 0; i < p.dim(); ++i)
            acc += p.coords[static_cast<std::size_t>(i)] * omega[static_cast<std::size_t>(i)].residue *
                   (big / omega[static_cast<std::size_t>(i)].order);
        return acc % big == 0;
    };
    OmegaFilterResult out;
    std::vector<Support> filtered;
    for (const auto& s : c.supports()) {
        std::vector<LatticePoint> keep;
        for (const auto& p : s.points())
            if (!in_kernel(p)) keep.push_back(p);
        if (!keep.empty()) ++out.nonempty_members;
        filtered.emplace_back(c.ambient_dim(), std::move(keep));
    }
    out.filtered = SupportCollection(c.ambient_dim(), std::move(filtered));
    return out;
}

}  // namespace sparsetrace
