#include "sparsetrace/polysys.hpp"

#include "sparsetrace/errors.hpp"

namespace sparsetrace {

bool TorusPoint::in_torus(double floor) const {
    for (int i = 0; i < dim(); ++i)
        if (std::abs(x[i]) <= floor) return false;
    return true;
}

void SparseSystem::validate() const {
    if (static_cast<int>(coefficients.size()) != collection.count())
        throw PreconditionError("coefficient block count mismatch");
    for (int i = 0; i < collection.count(); ++i)
        if (coefficients[static_cast<std::size_t>(i)].size() != collection[i].size())
            throw PreconditionError("coefficient length mismatch");
}

bool SparseSystem::zero_row(int i) const {
    const CVec& c = coefficients[static_cast<std::size_t>(i)];
    for (int j = 0; j < c.size(); ++j)
        if (c[j] != Cx(0.0, 0.0)) return false;
    return true;
}

Cx ipow(Cx base, const Int& e) {
    bool neg = e < 0;
    Int k = neg ? -e : e;
    Cx acc(1.0, 0.0);
    Cx b = base;
    while (k > 0) {
        if ((k & 1) != 0) acc *= b;
        b *= b;
        k >>= 1;
    }
    return neg ? Cx(1.0, 0.0) / acc : acc;
}

namespace {

Cx monomial(const LatticePoint& a, const TorusPoint& p) {
    Cx m(1.0, 0.0);
    for (int i = 0; i < a.dim(); ++i) m *= ipow(p.x[i], a.coords[static_cast<std::size_t>(i)]);
    return m;
}

}  // namespace

CVec evaluate(const SparseSystem& f, const TorusPoint& p) {
    if (!p.in_torus()) throw PreconditionError("evaluation point has a zero coordinate");
    CVec out = CVec::Zero(f.equations());
    for (int i = 0; i < f.equations(); ++i) {
        const Support& s = f.collection[i];
        const CVec& c = f.coefficients[static_cast<std::size_t>(i)];
        Cx acc(0.0, 0.0);
        for (int j = 0; j < s.size(); ++j) acc += c[j] * monomial(s.points()[static_cast<std::size_t>(j)], p);
        out[i] = acc;
    }
    return out;
}

Eigen::VectorXd evaluation_scale(const SparseSystem& f, const TorusPoint& p) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(f.equations());
    for (int i = 0; i < f.equations(); ++i) {
        const Support& s = f.collection[i];
        const CVec& c = f.coefficients[static_cast<std::size_t>(i)];
        double acc = 0.0;
        for (int j = 0; j < s.size(); ++j)
            acc += std::abs(c[j]) * std::abs(monomial(s.points()[static_cast<std::size_t>(j)], p));
        out[i] = acc;
    }
    return out;
}

CMat jacobian(const SparseSystem& f, const TorusPoint& p) {
    if (!p.in_torus()) throw PreconditionError("evaluation point has a zero coordinate");
    int n = f.vars();
    CMat out = CMat::Zero(f.equations(), n);
    for (int i = 0; i < f.equations(); ++i) {
        const Support& s = f.collection[i];
        const CVec& c = f.coefficients[static_cast<std::size_t>(i)];
        for (int j = 0; j < s.size(); ++j) {
            Cx m = c[j] * monomial(s.points()[static_cast<std::size_t>(j)], p);
            if (m == Cx(0.0, 0.0)) continue;
            for (int v = 0; v < n; ++v) {
                const Int& e = s.points()[static_cast<std::size_t>(j)].coords[static_cast<std::size_t>(v)];
                if (e == 0) continue;
                out(i, v) += m * Cx(static_cast<double>(to_long(e)), 0.0) / p.x[v];
            }
        }
    }
    return out;
}

std::pair<SparseSystem, SparseSystem> split(const SparseSystem& f, const SupportCollection& b) {
    if (!b.subset_of(f.collection)) throw PreconditionError("split set is not a subset of the support");
    SparseSystem on_b = f, rest = f;
    for (int i = 0; i < f.equations(); ++i) {
        const Support& s = f.collection[i];
        for (int j = 0; j < s.size(); ++j) {
            bool inside = b[i].contains(s.points()[static_cast<std::size_t>(j)]);
            if (inside)
                rest.coefficients[static_cast<std::size_t>(i)][j] = Cx(0.0, 0.0);
            else
                on_b.coefficients[static_cast<std::size_t>(i)][j] = Cx(0.0, 0.0);
        }
    }
    return {on_b, rest};
}

SparseSystem resample_on(const SparseSystem& f, const SupportCollection& b, Rng& rng) {
    if (!b.subset_of(f.collection)) throw PreconditionError("resample set is not a subset of the support");
    SparseSystem out = f;
    for (int i = 0; i < f.equations(); ++i) {
        const Support& s = f.collection[i];
        for (int j = 0; j < s.size(); ++j)
            if (b[i].contains(s.points()[static_cast<std::size_t>(j)]))
                out.coefficients[static_cast<std::size_t>(i)][j] = rng.annulus();
    }
    return out;
}

SparseSystem random_system(const SupportCollection& c, std::uint64_t seed) {
    Rng rng(seed);
    SparseSystem out;
    out.collection = c;
    for (int i = 0; i < c.count(); ++i) {
        CVec v(c[i].size());
        for (int j = 0; j < v.size(); ++j) v[j] = rng.annulus();
        out.coefficients.push_back(std::move(v));
    }
    return out;
}

SparseSystem apply_monomial_map(const SparseSystem& f, const MonomialMap& map, bool pullback) {
    if (map.determinant == 0) throw PreconditionError("singular monomial map");
    SparseSystem out;
    out.collection = SupportCollection();
    std::vector<Support> mapped;
    std::vector<CVec> coeffs;
    for (int i = 0; i < f.equations(); ++i) {
        const Support& s = f.collection[i];
        std::vector<std::pair<LatticePoint, Cx>> entries;
        for (int j = 0; j < s.size(); ++j) {
            LatticePoint q;
            if (pullback) {
                auto inv = map.apply_inverse(s.points()[static_cast<std::size_t>(j)]);
                if (!inv) throw PreconditionError("monomial map pullback has non-integral exponents");
                q = *inv;
            } else {
                q = map.apply(s.points()[static_cast<std::size_t>(j)]);
            }
            entries.emplace_back(std::move(q), f.coefficients[static_cast<std::size_t>(i)][j]);
        }
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<LatticePoint> pts;
        CVec c(static_cast<Eigen::Index>(entries.size()));
        for (std::size_t j = 0; j < entries.size(); ++j) {
            pts.push_back(entries[j].first);
            c[static_cast<Eigen::Index>(j)] = entries[j].second;
        }
        mapped.emplace_back(f.vars(), std::move(pts));
        coeffs.push_back(std::move(c));
    }
    out.collection = SupportCollection(f.vars(), std::move(mapped));
    out.coefficients = std::move(coeffs);
    return out;
}

TorusPoint monomial_image(const MonomialMap& map, const TorusPoint& p) {
    int n = p.dim();
    CVec y(n);
    for (int i = 0; i < n; ++i) {
        Cx acc(1.0, 0.0);
        for (int r = 0; r < n; ++r) acc *= ipow(p.x[r], map.matrix.at(r, i));
        y[i] = acc;
    }
    return TorusPoint(y);
}

SegmentFamily SegmentFamily::between(SparseSystem target, SparseSystem start) {
    if (!(target.collection == start.collection))
        throw PreconditionError("segment endpoints live over different collections");
    target.validate();
    start.validate();
    SegmentFamily fam;
    fam.f = std::move(target);
    fam.g = std::move(start);
    return fam;
}

SparseSystem SegmentFamily::at(double t) const {
    SparseSystem out = f;
    Cx gs = use_gamma ? gamma : Cx(1.0, 0.0);
    for (std::size_t i = 0; i < out.coefficients.size(); ++i)
        out.coefficients[i] = t * f.coefficients[i] + (1.0 - t) * gs * g.coefficients[i];
    return out;
}

CVec SegmentFamily::eval(double t, const TorusPoint& p) const {
    Cx gs = use_gamma ? gamma : Cx(1.0, 0.0);
    return t * evaluate(f, p) + (1.0 - t) * gs * evaluate(g, p);
}

CMat SegmentFamily::jac(double t, const TorusPoint& p) const {
    Cx gs = use_gamma ? gamma : Cx(1.0, 0.0);
    return t * jacobian(f, p) + (1.0 - t) * gs * jacobian(g, p);
}

CVec SegmentFamily::eval_dt(const TorusPoint& p) const {
    Cx gs = use_gamma ? gamma : Cx(1.0, 0.0);
    return evaluate(f, p) - gs * evaluate(g, p);
}

}  // namespace sparsetrace
