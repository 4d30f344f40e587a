#include "sparsetrace/geometry.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sparsetrace/errors.hpp"
#include "sparsetrace/simplex.hpp"

namespace sparsetrace {

// ---------------------------------------------------------------- simplex --

namespace {

class Tableau {
public:
    // rows: constraints then objective; basis[i] = variable basic in row i
    std::vector<std::vector<Rat>> t;
    std::vector<int> basis;
    int nvars;

    Tableau(const std::vector<std::vector<Rat>>& a, const std::vector<Rat>& b, int extra)
        : nvars(static_cast<int>(a.empty() ? 0 : a[0].size())) {
        int m = static_cast<int>(a.size());
        int width = nvars + extra + 1;
        t.assign(static_cast<std::size_t>(m) + 1, std::vector<Rat>(static_cast<std::size_t>(width)));
        for (int i = 0; i < m; ++i) {
            bool neg = b[static_cast<std::size_t>(i)] < 0;
            for (int j = 0; j < nvars; ++j)
                t[i][j] = neg ? -a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                              : a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            t[i][width - 1] = neg ? -b[static_cast<std::size_t>(i)] : b[static_cast<std::size_t>(i)];
        }
        basis.assign(static_cast<std::size_t>(m), -1);
    }

    int rows() const { return static_cast<int>(t.size()) - 1; }
    int rhs() const { return static_cast<int>(t[0].size()) - 1; }

    void pivot(int pr, int pc) {
        Rat piv = t[static_cast<std::size_t>(pr)][static_cast<std::size_t>(pc)];
        for (auto& v : t[static_cast<std::size_t>(pr)]) v /= piv;
        for (int i = 0; i <= rows(); ++i) {
            if (i == pr) continue;
            Rat f = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(pc)];
            if (f == 0) continue;
            for (int j = 0; j <= rhs(); ++j)
                t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    f * t[static_cast<std::size_t>(pr)][static_cast<std::size_t>(j)];
        }
        basis[static_cast<std::size_t>(pr)] = pc;
    }

    // Bland's rule; eligible(j) restricts entering variables.
    // Returns false when unbounded.
    template <typename Eligible>
    bool run(Eligible eligible) {
        const int obj = rows();
        while (true) {
            int enter = -1;
            for (int j = 0; j < rhs(); ++j)
                if (eligible(j) && t[static_cast<std::size_t>(obj)][static_cast<std::size_t>(j)] > 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Rat best;
            for (int i = 0; i < rows(); ++i) {
                const Rat& coef = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
                if (coef <= 0) continue;
                Rat ratio = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(rhs())] / coef;
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpResult lp_maximize(const std::vector<std::vector<Rat>>& a,
                     const std::vector<Rat>& b,
                     const std::vector<Rat>& c) {
    int m = static_cast<int>(a.size());
    int n = static_cast<int>(c.size());
    Tableau tab(a, b, m);
    // phase 1: artificial basis, minimize artificial sum
    for (int i = 0; i < m; ++i) {
        tab.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = 1;
        tab.basis[static_cast<std::size_t>(i)] = n + i;
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= tab.rhs(); ++j)
            tab.t[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] +=
                tab.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    for (int i = 0; i < m; ++i)
        tab.t[static_cast<std::size_t>(m)][static_cast<std::size_t>(n + i)] = 0;
    tab.run([&](int j) { return j < n; });

    LpResult out;
    if (tab.t[static_cast<std::size_t>(m)][static_cast<std::size_t>(tab.rhs())] != 0) {
        out.status = LpResult::Status::Infeasible;
        return out;
    }
    // drive any basic artificial (at value zero) out of the basis
    for (int i = 0; i < m; ++i) {
        if (tab.basis[static_cast<std::size_t>(i)] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (tab.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0) {
                col = j;
                break;
            }
        if (col >= 0) tab.pivot(i, col);
        // else: redundant row; harmless to leave in place
    }
    // phase 2 objective
    auto& obj = tab.t[static_cast<std::size_t>(m)];
    std::fill(obj.begin(), obj.end(), Rat(0));
    for (int j = 0; j < n; ++j) obj[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
    for (int i = 0; i < m; ++i) {
        int bv = tab.basis[static_cast<std::size_t>(i)];
        if (bv < 0 || bv >= n) continue;
        Rat f = obj[static_cast<std::size_t>(bv)];
        if (f == 0) continue;
        for (int j = 0; j <= tab.rhs(); ++j)
            obj[static_cast<std::size_t>(j)] -= f * tab.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    if (!tab.run([&](int j) { return j < n; })) {
        out.status = LpResult::Status::Unbounded;
        return out;
    }
    out.status = LpResult::Status::Optimal;
    out.solution.assign(static_cast<std::size_t>(n), Rat(0));
    for (int i = 0; i < m; ++i) {
        int bv = tab.basis[static_cast<std::size_t>(i)];
        if (bv >= 0 && bv < n)
            out.solution[static_cast<std::size_t>(bv)] =
                tab.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(tab.rhs())];
    }
    out.value = 0;
    for (int j = 0; j < n; ++j) out.value += c[static_cast<std::size_t>(j)] * out.solution[static_cast<std::size_t>(j)];
    return out;
}

// ------------------------------------------------------------------- hulls --

int affine_rank(const std::vector<LatticePoint>& pts) {
    if (pts.size() <= 1) return 0;
    int n = pts.front().dim();
    IMat g(n, static_cast<int>(pts.size()) - 1);
    for (int j = 1; j < static_cast<int>(pts.size()); ++j)
        for (int i = 0; i < n; ++i)
            g.at(i, j - 1) = pts[static_cast<std::size_t>(j)].coords[static_cast<std::size_t>(i)] -
                             pts[0].coords[static_cast<std::size_t>(i)];
    return hermite_normal_form(g).basis.cols;
}

std::vector<LatticePoint> minkowski_sum_points(const std::vector<LatticePoint>& a,
                                               const std::vector<LatticePoint>& b) {
    std::set<LatticePoint> out;
    for (const auto& p : a)
        for (const auto& q : b) out.insert(p + q);
    return {out.begin(), out.end()};
}

namespace {

std::vector<LatticePoint> dedupe_sorted(std::vector<LatticePoint> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

Int dot(const std::vector<Int>& a, const std::vector<Int>& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void make_primitive(std::vector<Int>& v, Int& off) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    g = gcd(g, off);
    if (g > 1) {
        for (auto& x : v) x /= g;
        off /= g;
    }
}

// Normal of the hyperplane through d affinely independent points in R^d via
// cofactor expansion of the (d-1) x d difference matrix.
std::vector<Int> hyperplane_normal(const std::vector<LatticePoint>& pts,
                                   const std::vector<int>& idx) {
    int d = pts.front().dim();
    IMat diff(d - 1, d);
    for (int r = 0; r + 1 < d; ++r)
        for (int c = 0; c < d; ++c)
            diff.at(r, c) = pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(r) + 1])].coords[static_cast<std::size_t>(c)] -
                            pts[static_cast<std::size_t>(idx[0])].coords[static_cast<std::size_t>(c)];
    std::vector<Int> normal(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) {
        IMat minor(d - 1, d - 1);
        for (int r = 0; r + 1 < d; ++r) {
            int cc = 0;
            for (int j = 0; j < d; ++j) {
                if (j == c) continue;
                minor.at(r, cc++) = diff.at(r, j);
            }
        }
        Int m = determinant(minor);
        normal[static_cast<std::size_t>(c)] = (c % 2 == 0) ? m : -m;
    }
    return normal;
}

// Supporting hyperplanes of a full-dimensional point set by brute-force
// enumeration of d-subsets. Input sizes stay small because Minkowski sums are
// formed from summand hull vertices only.
std::vector<Facet> enumerate_facets(const std::vector<LatticePoint>& pts, int d) {
    std::map<std::pair<std::vector<Int>, Int>, bool> seen;
    std::vector<Facet> facets;
    int m = static_cast<int>(pts.size());
    if (m < d) return facets;
    std::vector<int> idx(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::vector<Int> normal = hyperplane_normal(pts, idx);
        bool nonzero = std::any_of(normal.begin(), normal.end(), [](const Int& v) { return v != 0; });
        if (nonzero) {
            Int off = dot(normal, pts[static_cast<std::size_t>(idx[0])].coords);
            bool above = false, below = false;
            for (const auto& p : pts) {
                Int v = dot(normal, p.coords);
                if (v > off) above = true;
                else if (v < off) below = true;
                if (above && below) break;
            }
            if (!(above && below)) {
                if (above) {
                    for (auto& v : normal) v = -v;
                    off = -off;
                }
                make_primitive(normal, off);
                auto key = std::make_pair(normal, off);
                if (!seen.count(key)) {
                    seen[key] = true;
                    facets.push_back(Facet{normal, off});
                }
            }
        }
        // next d-combination
        int k = d - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - d + k) --k;
        if (k < 0) break;
        ++idx[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j) - 1] + 1;
    }
    return facets;
}

Rat volume_full_dim(const std::vector<LatticePoint>& pts, int d);

Int cross2(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return (a.coords[0] - o.coords[0]) * (b.coords[1] - o.coords[1]) -
           (a.coords[1] - o.coords[1]) * (b.coords[0] - o.coords[0]);
}

// Andrew's monotone chain; input sorted unique. Collinear points dropped.
std::vector<LatticePoint> chain_hull_2d(const std::vector<LatticePoint>& pts) {
    int m = static_cast<int>(pts.size());
    if (m <= 2) return pts;
    std::vector<LatticePoint> h(2 * static_cast<std::size_t>(m));
    int k = 0;
    for (int i = 0; i < m; ++i) {
        while (k >= 2 && cross2(h[static_cast<std::size_t>(k) - 2], h[static_cast<std::size_t>(k) - 1], pts[static_cast<std::size_t>(i)]) <= 0) --k;
        h[static_cast<std::size_t>(k++)] = pts[static_cast<std::size_t>(i)];
    }
    for (int i = m - 2, lower = k + 1; i >= 0; --i) {
        while (k >= lower && cross2(h[static_cast<std::size_t>(k) - 2], h[static_cast<std::size_t>(k) - 1], pts[static_cast<std::size_t>(i)]) <= 0) --k;
        h[static_cast<std::size_t>(k++)] = pts[static_cast<std::size_t>(i)];
    }
    h.resize(static_cast<std::size_t>(k) - 1);  // last point equals first
    return h;
}

Rat shoelace_area(const std::vector<LatticePoint>& poly) {
    Int twice = 0;
    int m = static_cast<int>(poly.size());
    for (int i = 0; i < m; ++i) {
        const auto& p = poly[static_cast<std::size_t>(i)];
        const auto& q = poly[static_cast<std::size_t>((i + 1) % m)];
        twice += p.coords[0] * q.coords[1] - q.coords[0] * p.coords[1];
    }
    return Rat(abs(twice), 2);
}

// Sound interior-point reduction: the exact midpoint of two set members is
// never a vertex. Iterated to a fixpoint; greatly shrinks Minkowski-sum
// grids before facet enumeration.
std::vector<LatticePoint> drop_midpoints(std::vector<LatticePoint> pts) {
    bool changed = true;
    int guard = 0;
    while (changed && ++guard < 64) {
        changed = false;
        std::set<LatticePoint> alive(pts.begin(), pts.end());
        int m = static_cast<int>(pts.size());
        for (int i = 0; i < m && alive.size() > 1; ++i) {
            for (int j = i + 1; j < m; ++j) {
                LatticePoint mid = pts[static_cast<std::size_t>(i)];
                bool integral = true;
                for (std::size_t c = 0; c < mid.coords.size(); ++c) {
                    Int s = pts[static_cast<std::size_t>(i)].coords[c] + pts[static_cast<std::size_t>(j)].coords[c];
                    if (s % 2 != 0) { integral = false; break; }
                    mid.coords[c] = s / 2;
                }
                if (!integral || mid == pts[static_cast<std::size_t>(i)]) continue;
                auto it = alive.find(mid);
                if (it != alive.end()) {
                    alive.erase(it);
                    changed = true;
                }
            }
        }
        if (changed) pts.assign(alive.begin(), alive.end());
    }
    return pts;
}

// (d-1)-dimensional volume contribution of one facet, projected along a
// nonzero-normal coordinate; the metric correction cancels against the
// distance factor in the cone formula.
Rat cone_term(const std::vector<LatticePoint>& pts, const Facet& f,
              const LatticePoint& apex, int d) {
    Int apex_gap = dot(f.normal, apex.coords) - f.offset_value;
    if (apex_gap == 0) return Rat(0);
    int j = 0;
    while (f.normal[static_cast<std::size_t>(j)] == 0) ++j;
    std::vector<LatticePoint> shadow;
    for (const auto& p : pts) {
        if (dot(f.normal, p.coords) != f.offset_value) continue;
        std::vector<Int> q;
        q.reserve(static_cast<std::size_t>(d) - 1);
        for (int c = 0; c < d; ++c)
            if (c != j) q.push_back(p.coords[static_cast<std::size_t>(c)]);
        shadow.emplace_back(std::move(q));
    }
    shadow = dedupe_sorted(std::move(shadow));
    Rat base = volume_full_dim(shadow, d - 1);
    Rat height = Rat(abs(apex_gap), abs(f.normal[static_cast<std::size_t>(j)]));
    return base * height / d;
}

Rat volume_full_dim(const std::vector<LatticePoint>& pts, int d) {
    if (d == 0) return Rat(1);
    if (d == 1) {
        Int lo = pts.front().coords[0], hi = lo;
        for (const auto& p : pts) {
            lo = std::min(lo, p.coords[0]);
            hi = std::max(hi, p.coords[0]);
        }
        return Rat(hi - lo);
    }
    if (d == 2) return shoelace_area(chain_hull_2d(pts));
    if (affine_rank(pts) < d) return Rat(0);
    std::vector<LatticePoint> reduced = drop_midpoints(pts);
    std::vector<Facet> facets = enumerate_facets(reduced, d);
    const LatticePoint& apex = reduced.front();  // lexicographically least
    Rat vol = 0;
    for (const auto& f : facets) vol += cone_term(reduced, f, apex, d);
    return vol;
}

}  // namespace

Rat volume_of_points(int ambient_dim, const std::vector<LatticePoint>& pts) {
    if (pts.empty()) return Rat(0);
    auto sorted = dedupe_sorted(pts);
    if (affine_rank(sorted) < ambient_dim) return Rat(0);
    return volume_full_dim(sorted, ambient_dim);
}

Polytope convex_hull(const Support& a) {
    if (a.size() == 0) throw PreconditionError("hull of empty support");
    Polytope p;
    p.ambient_dim = a.ambient_dim();
    std::vector<LatticePoint> pts = a.points();  // already sorted unique
    p.dim = affine_rank(pts);
    if (p.dim == 0) {
        p.vertices = pts;
        return p;
    }
    if (p.dim < p.ambient_dim) {
        // map into the affine hull's lattice coordinates and recurse
        std::vector<LatticePoint> diffs;
        for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(pts[i] - pts[0]);
        SublatticeInfo sub = sublattice_of_generators(p.ambient_dim, diffs);
        std::vector<LatticePoint> mapped;
        for (const auto& q : pts) {
            auto x = solve_integral(sub.basis, (q - pts[0]).coords);
            if (!x) throw std::logic_error("affine hull projection failed");
            mapped.emplace_back(*x);
        }
        Polytope inner = convex_hull(Support(p.dim, mapped));
        for (const auto& v : inner.vertices) {
            LatticePoint back = pts[0];
            for (int j = 0; j < sub.basis.cols; ++j)
                for (int i = 0; i < p.ambient_dim; ++i)
                    back.coords[static_cast<std::size_t>(i)] += sub.basis.at(i, j) * v.coords[static_cast<std::size_t>(j)];
            p.vertices.push_back(back);
        }
        std::sort(p.vertices.begin(), p.vertices.end());
        return p;
    }
    p.facets = enumerate_facets(pts, p.ambient_dim);
    for (const auto& q : pts) {
        std::vector<LatticePoint> active;
        for (const auto& f : p.facets)
            if (dot(f.normal, q.coords) == f.offset_value) active.emplace_back(f.normal);
        if (static_cast<int>(active.size()) >= p.ambient_dim) {
            IMat g(p.ambient_dim, static_cast<int>(active.size()));
            for (int j = 0; j < g.cols; ++j)
                for (int i = 0; i < g.rows; ++i)
                    g.at(i, j) = active[static_cast<std::size_t>(j)].coords[static_cast<std::size_t>(i)];
            if (hermite_normal_form(g).basis.cols == p.ambient_dim) p.vertices.push_back(q);
        }
    }
    return p;
}

Rat euclidean_volume(const Polytope& p) {
    if (p.degenerate()) return Rat(0);
    return volume_of_points(p.ambient_dim, p.vertices);
}

}  // namespace sparsetrace
