#include "sparsetrace/tracetest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sparsetrace/errors.hpp"

namespace sparsetrace {

Cx trace(const std::vector<TorusPoint>& s, int coord) {
    if (s.empty()) throw PreconditionError("trace of an empty set");
    double sum_re = 0.0, sum_im = 0.0, c_re = 0.0, c_im = 0.0;
    for (const auto& p : s) {
        double yr = p.x[coord].real() - c_re;
        double tr = sum_re + yr;
        c_re = (tr - sum_re) - yr;
        sum_re = tr;
        double yi = p.x[coord].imag() - c_im;
        double ti = sum_im + yi;
        c_im = (ti - sum_im) - yi;
        sum_im = ti;
    }
    return {sum_re, sum_im};
}

Cx centroid_coord(const std::vector<TorusPoint>& s, int coord) {
    return trace(s, coord) / static_cast<double>(s.size());
}

std::pair<bool, double> collinear(Cx p0, Cx ph, Cx p1, double rel_tol) {
    double scale = std::max({1.0, std::abs(p0), std::abs(p1)});
    double residual = std::abs(ph - (p0 + p1) / 2.0) / scale;
    return {residual <= rel_tol, residual};
}

const char* to_string(LinearityClass c) {
    switch (c) {
        case LinearityClass::Constant: return "constant";
        case LinearityClass::AffineLinear: return "affine_linear";
        case LinearityClass::Nonlinear: return "nonlinear";
    }
    return "unknown";
}

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw PreconditionError(msg);
}

// validation shared by the two trace tests; returns the genericity mode note
std::string validate_inputs(const SupportCollection& c, const SparseSystem& f,
                            const std::vector<TorusPoint>& s, const SupportCollection& b,
                            const SupportCollection& candidate, const char* candidate_name,
                            const TraceConfig& cfg, std::vector<std::string>& notes) {
    require(c.square(), "trace test: collection must be square");
    require(has_positive_mixed_volume_by_defect(c), "trace test: mixed volume is zero");
    SublatticeInfo lat = collection_lattice(c);
    require(lat.full_rank(c.ambient_dim()) && *lat.index == 1,
            "trace test: collection lattice must be all of Z^n (nonlacunary with full rank)");
    if (cfg.allow_nonabundant) {
        if (!is_abundant(b))
            notes.emplace_back("abundance waived: pass verdicts are not conclusive");
    } else {
        require(is_abundant(b), "trace test: perturbation set must be abundant");
    }
    if (cfg.b_certified) {
        require(b.subset_of(c), "trace test: perturbation set must lie inside the support");
        notes.emplace_back("candidate certification waived by caller");
    } else {
        require(b.subset_of(candidate),
                std::string("trace test: perturbation set exceeds the ") + candidate_name);
    }
    require(!s.empty(), "trace test: empty solution subset");
    for (const auto& p : s) {
        PathOutcome chk = newton_polish(f, p, cfg.tracker);
        require(chk.success() && (p.x - chk.end->x).lpNorm<Eigen::Infinity>() <= 1e-6,
                "trace test: subset point does not solve the system");
    }

    Int mv = mixed_volume(c);
    if (Int(static_cast<long>(s.size())) == mv) return "full-by-count";
    if (cfg.full_solve_check) {
        SolutionSet solved = solve_torus(f, 0xB0B5EEDULL, cfg.tracker);
        require(is_bernstein_generic(f, solved, cfg.tracker),
                "trace test: system is not Bernstein-generic");
        return "full-solve";
    }
    return "spot-check";
}

std::vector<TorusPoint> tracked_or_abort(const SegmentFamily& fam,
                                         const std::vector<TorusPoint>& pts, double from_t,
                                         double to_t, const TrackerConfig& cfg,
                                         std::vector<PathStatus>& statuses) {
    TrackSetResult tr = track_set(fam, pts, from_t, to_t, cfg);
    for (const auto& o : tr.outcomes) statuses.push_back(o.status);
    if (!tr.all_success())
        throw TrackingAbort("path failure while deforming the coefficients; resample the random system");
    if (!tr.crossings.empty())
        throw TrackingAbort("tracked points collided; resample the random system");
    return tr.endpoints();
}

}  // namespace

TraceReport sparse_trace_test(const SupportCollection& c, const SparseSystem& f,
                              const std::vector<TorusPoint>& s, const SupportCollection& b,
                              std::uint64_t seed, const TraceConfig& cfg) {
    TraceReport rep;
    rep.algorithm = "sparse_trace_test";
    rep.seed = seed;
    rep.tol = cfg.rel_tol;
    rep.genericity_mode =
        validate_inputs(c, f, s, b, trace_affine_candidate(c), "trace-affine candidate", cfg, rep.notes);

    Rng rng = Rng(seed).fork(0xA1);
    SparseSystem g = resample_on(f, b, rng);
    SegmentFamily fam = SegmentFamily::between(f, g);

    Cx s1 = trace(s, 0);
    std::vector<TorusPoint> at_half =
        tracked_or_abort(fam, s, 1.0, 0.5, cfg.tracker, rep.path_statuses);
    Cx shalf = trace(at_half, 0);
    std::vector<TorusPoint> at_zero =
        tracked_or_abort(fam, at_half, 0.5, 0.0, cfg.tracker, rep.path_statuses);
    Cx s0 = trace(at_zero, 0);

    rep.samples = {{0.0, s0}, {0.5, shalf}, {1.0, s1}};
    auto [ok, residual] = collinear(s0, shalf, s1, cfg.rel_tol);
    rep.collinearity_residual = residual;
    rep.pass = ok;
    return rep;
}

TraceReport constant_sparse_trace_test(const SupportCollection& c, const SparseSystem& f,
                                       const std::vector<TorusPoint>& s,
                                       const SupportCollection& b, std::uint64_t seed,
                                       const TraceConfig& cfg) {
    TraceReport rep;
    rep.algorithm = "constant_sparse_trace_test";
    rep.seed = seed;
    rep.tol = cfg.rel_tol;
    rep.genericity_mode = validate_inputs(c, f, s, b, trace_invariant_candidate(c),
                                          "trace-invariant candidate", cfg, rep.notes);

    Rng rng = Rng(seed).fork(0xA2);
    SparseSystem g = resample_on(f, b, rng);
    SegmentFamily fam = SegmentFamily::between(f, g);

    Cx s1 = trace(s, 0);
    std::vector<TorusPoint> prime =
        tracked_or_abort(fam, s, 1.0, 0.0, cfg.tracker, rep.path_statuses);
    Cx s0 = trace(prime, 0);

    rep.samples = {{0.0, s0}, {1.0, s1}};
    double scale = std::max({1.0, std::abs(s0), std::abs(s1)});
    rep.collinearity_residual = std::abs(s1 - s0) / scale;
    rep.pass = rep.collinearity_residual <= cfg.rel_tol;
    return rep;
}

LinearityProbeReport linearity_probe(const SupportCollection& c, const SparseSystem& f,
                                     const SupportCollection& perturb_set, int num_t,
                                     std::uint64_t seed, const TraceConfig& cfg) {
    require(num_t >= 5, "linearity probe needs at least 5 sample points");
    require(perturb_set.subset_of(c), "perturbation set must lie inside the support");
    f.validate();

    Rng rng = Rng(seed).fork(0xA3);
    SparseSystem delta = f;
    for (auto& block : delta.coefficients) block.setZero();
    delta = resample_on(delta, perturb_set, rng);

    LinearityProbeReport rep;
    for (int k = 0; k < num_t; ++k) {
        bool done = false;
        for (int attempt = 0; attempt <= 5 && !done; ++attempt) {
            double t = static_cast<double>(k) + static_cast<double>(attempt) / 7.0;
            SparseSystem ft = f;
            for (std::size_t i = 0; i < ft.coefficients.size(); ++i)
                ft.coefficients[i] += t * delta.coefficients[i];
            SolutionSet sol = solve_torus(
                ft, mix_seed(seed, static_cast<std::uint64_t>(k * 8 + attempt)), cfg.tracker);
            if (!is_bernstein_generic(ft, sol, cfg.tracker)) continue;
            rep.samples.emplace_back(t, trace(sol.points, 0));
            done = true;
        }
        if (!done) throw TrackingAbort("no Bernstein-generic sample after 5 retries");
    }

    for (const auto& [t, v] : rep.samples) rep.scale = std::max(rep.scale, std::abs(v));
    // divided differences; on the unit-spaced ladder these reduce to plain
    // forward differences
    std::vector<Cx> first;
    for (std::size_t i = 0; i + 1 < rep.samples.size(); ++i) {
        Cx d = (rep.samples[i + 1].second - rep.samples[i].second) /
               (rep.samples[i + 1].first - rep.samples[i].first);
        first.push_back(d);
        rep.max_first_divided = std::max(rep.max_first_divided, std::abs(d));
    }
    for (std::size_t i = 0; i + 2 < rep.samples.size(); ++i) {
        Cx d2 = (first[i + 1] - first[i]) * 2.0 /
                (rep.samples[i + 2].first - rep.samples[i].first);
        rep.max_second_divided = std::max(rep.max_second_divided, std::abs(d2));
    }

    if (rep.max_first_divided <= 1e-6 * rep.scale)
        rep.classification = LinearityClass::Constant;
    else if (rep.max_second_divided <= 1e-5 * rep.scale)
        rep.classification = LinearityClass::AffineLinear;
    else
        rep.classification = LinearityClass::Nonlinear;
    return rep;
}

LacunaryTraceReport lacunary_trace_check(const SupportCollection& c, const SparseSystem& f,
                                         std::uint64_t seed, const TraceConfig& cfg) {
    require(is_lacunary(c), "lacunary check on a nonlacunary collection");
    f.validate();
    LacunaryTraceReport rep;
    SublatticeInfo lat = collection_lattice(c);
    require(lat.full_rank(c.ambient_dim()), "rank-deficient collection lattice");
    rep.index = *lat.index;

    SolutionSet sol = solve_torus(f, seed, cfg.tracker);
    require(is_bernstein_generic(f, sol, cfg.tracker), "system is not Bernstein-generic");
    rep.trace_full = trace(sol.points, 0);

    std::vector<Int> e1(static_cast<std::size_t>(c.ambient_dim()));
    e1[0] = 1;
    rep.e1_in_lattice = lat.contains(LatticePoint(e1));

    double scale = 1.0;
    for (const auto& p : sol.points) scale += std::abs(p.x[0]);

    if (!rep.e1_in_lattice) {
        rep.rel_err = std::abs(rep.trace_full) / scale;
        rep.pass = rep.rel_err < 1e-6;
        // paired fibres: grouping by the monomial image must split the set
        // into index-sized classes with vanishing first-coordinate sums
        LacunaryReduction red = lacunary_reduction(c);
        std::map<std::vector<long>, std::vector<int>> groups;
        for (std::size_t i = 0; i < sol.points.size(); ++i) {
            TorusPoint y = monomial_image(red.map, sol.points[i]);
            std::vector<long> key;
            for (int k = 0; k < y.dim(); ++k) {
                key.push_back(std::lround(y.x[k].real() * 1e6));
                key.push_back(std::lround(y.x[k].imag() * 1e6));
            }
            groups[key].push_back(static_cast<int>(i));
        }
        rep.fibre_subset_ok = true;
        for (const auto& [key, members] : groups) {
            Cx acc = 0;
            for (int i : members) acc += sol.points[static_cast<std::size_t>(i)].x[0];
            if (std::abs(acc) > 1e-6 * scale) rep.fibre_subset_ok = false;
        }
        return rep;
    }

    LacunaryReduction red = lacunary_reduction(c);
    // coefficients transported along the point correspondence
    SparseSystem reduced;
    reduced.collection = red.reduced;
    for (int i = 0; i < c.count(); ++i) {
        const Support& a = c[i];
        const Support& bsup = red.reduced[i];
        CVec coeff = CVec::Zero(bsup.size());
        for (int j = 0; j < a.size(); ++j) {
            LatticePoint q = a.points()[static_cast<std::size_t>(j)] - red.translations[static_cast<std::size_t>(i)];
            auto inv = red.map.apply_inverse(q);
            coeff[bsup.index_of(*inv)] = f.coefficients[static_cast<std::size_t>(i)][j];
        }
        reduced.coefficients.push_back(std::move(coeff));
    }
    SolutionSet sol_red = solve_torus(reduced, mix_seed(seed, 17), cfg.tracker);
    require(is_bernstein_generic(reduced, sol_red, cfg.tracker),
            "reduced system is not Bernstein-generic");
    rep.trace_reduced = trace(sol_red.points, 0);

    Cx predicted = static_cast<double>(to_long(rep.index)) * rep.trace_reduced;
    double rel_scale = std::max({1.0, std::abs(rep.trace_full), std::abs(predicted)});
    rep.rel_err = std::abs(rep.trace_full - predicted) / rel_scale;
    rep.pass = rep.rel_err <= 1e-6;

    // one point per fibre of the monomial map carries 1/index of the trace
    std::map<std::vector<long>, std::vector<int>> groups;
    for (std::size_t i = 0; i < sol.points.size(); ++i) {
        TorusPoint y = monomial_image(red.map, sol.points[i]);
        std::vector<long> key;
        for (int k = 0; k < y.dim(); ++k) {
            key.push_back(std::lround(y.x[k].real() * 1e6));
            key.push_back(std::lround(y.x[k].imag() * 1e6));
        }
        groups[key].push_back(static_cast<int>(i));
    }
    Cx one_per_fibre = 0;
    bool sizes_ok = true;
    for (const auto& [key, members] : groups) {
        if (Int(static_cast<long>(members.size())) != rep.index) sizes_ok = false;
        one_per_fibre += sol.points[static_cast<std::size_t>(members.front())].x[0];
    }
    double idx = static_cast<double>(to_long(rep.index));
    rep.fibre_subset_ok =
        sizes_ok && std::abs(one_per_fibre - rep.trace_full / idx) <= 1e-6 * rel_scale;
    return rep;
}

TriangularTraceReport triangular_trace_check(const SupportCollection& c, const SparseSystem& f,
                                             std::uint64_t seed, const TraceConfig& cfg,
                                             const std::vector<int>* witness) {
    f.validate();
    TriangularTraceReport rep;
    if (witness) {
        rep.witness = *witness;
        std::sort(rep.witness.begin(), rep.witness.end());
    } else {
        auto w = is_triangular(c);
        require(w.has_value(), "collection is not triangular");
        rep.witness = *w;
    }
    int n = c.ambient_dim();
    int r = static_cast<int>(rep.witness.size());

    // degenerate full-index witness: the relation collapses to the identity
    bool full = (r == n);

    std::vector<LatticePoint> gens;
    std::vector<LatticePoint> shifts;
    for (int i : rep.witness) {
        require(i >= 0 && i < c.count(), "witness index out of range");
        const Support& s = c[i];
        LatticePoint shift = s.points().front();
        shifts.push_back(shift);
        for (const auto& p : s.points()) gens.push_back(p - shift);
    }
    SublatticeInfo lat = sublattice_of_generators(n, gens);
    require(lat.rank == r, "witness subset has the wrong lattice rank");
    std::vector<Int> e1v(static_cast<std::size_t>(n));
    e1v[0] = 1;
    require(lat.contains(LatticePoint(e1v)),
            "first unit vector is outside the witness sublattice");

    rep.mv_full = mixed_volume(c);
    rep.mv_sub = relative_mixed_volume(c, rep.witness);

    SolutionSet sol = solve_torus(f, seed, cfg.tracker);
    require(is_bernstein_generic(f, sol, cfg.tracker), "system is not Bernstein-generic");
    rep.trace_full = trace(sol.points, 0);

    if (full) {
        rep.trace_sub = rep.trace_full;
        rep.rel_err = 0.0;
        rep.pass = true;
        return rep;
    }

    // change of coordinates fixing e1 that flattens the witness lattice into
    // the first r coordinates
    IMat sat = saturation_basis(n, gens);
    auto e1_in_sat = solve_integral(sat, e1v);
    require(e1_in_sat.has_value(), "saturation does not contain the first unit vector");
    IMat completion = unimodular_with_first_column(*e1_in_sat);
    IMat sat_fixed = mat_mul(sat, completion);  // columns still span the saturation; first is e1

    Snf snf = smith_normal_form(sat_fixed);
    IMat phi(n, n);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < n; ++i) phi.at(i, j) = sat_fixed.at(i, j);
    IMat uinv = inverse_unimodular(snf.u);
    for (int j = r; j < n; ++j)
        for (int i = 0; i < n; ++i) phi.at(i, j) = uinv.at(i, j);
    Int det = determinant(phi);
    require(abs(det) == 1, "coordinate change is not unimodular");
    MonomialMap change{phi, det};

    SparseSystem g = apply_monomial_map(f, change, /*pullback=*/true);

    // the witness equations now live in the first r coordinates; factor out
    // the constant tail exponents and restrict
    std::vector<Support> sub_supports;
    std::vector<CVec> sub_coeffs;
    for (int k = 0; k < r; ++k) {
        int i = rep.witness[static_cast<std::size_t>(k)];
        const Support& s = g.collection[i];
        std::vector<LatticePoint> pts;
        for (const auto& p : s.points()) {
            std::vector<Int> head(p.coords.begin(), p.coords.begin() + r);
            for (int tail = r; tail < n; ++tail)
                require(p.coords[static_cast<std::size_t>(tail)] ==
                            s.points().front().coords[static_cast<std::size_t>(tail)],
                        "witness equation does not flatten");
            pts.emplace_back(std::move(head));
        }
        sub_supports.emplace_back(r, std::move(pts));
        sub_coeffs.push_back(g.coefficients[static_cast<std::size_t>(i)]);
    }
    SparseSystem sub;
    sub.collection = SupportCollection(r, std::move(sub_supports));
    sub.coefficients = std::move(sub_coeffs);

    SolutionSet sol_sub = solve_torus(sub, mix_seed(seed, 29), cfg.tracker);
    require(is_bernstein_generic(sub, sol_sub, cfg.tracker),
            "witness subsystem is not Bernstein-generic");
    rep.trace_sub = trace(sol_sub.points, 0);

    double factor = static_cast<double>(to_long(rep.mv_full)) / static_cast<double>(to_long(rep.mv_sub));
    Cx predicted = factor * rep.trace_sub;
    double scale = std::max({1.0, std::abs(rep.trace_full), std::abs(predicted)});
    rep.rel_err = std::abs(rep.trace_full - predicted) / scale;
    rep.pass = rep.rel_err <= 1e-6;
    return rep;
}

namespace {

int find_root(std::vector<int>& parent, int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
        parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
        a = parent[static_cast<std::size_t>(a)];
    }
    return a;
}

void unite(std::vector<int>& parent, int a, int b) {
    parent[static_cast<std::size_t>(find_root(parent, a))] = find_root(parent, b);
}

bool is_transposition(const Permutation& p) {
    int moved = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<int>(i)) ++moved;
    if (moved != 2) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<int>(i) && p[static_cast<std::size_t>(p[i])] != static_cast<int>(i))
            return false;
    return true;
}

Permutation compose(const Permutation& a, const Permutation& b) {
    Permutation out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[static_cast<std::size_t>(b[i])];
    return out;
}

Permutation invert(const Permutation& a) {
    Permutation out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[static_cast<std::size_t>(a[i])] = static_cast<int>(i);
    return out;
}

}  // namespace

MonodromyReport monodromy_experiment(const SupportCollection& c, const SparseSystem& f,
                                     const SupportCollection& b, int num_loops,
                                     std::uint64_t seed, const TraceConfig& cfg) {
    require(has_positive_mixed_volume_by_defect(c), "mixed volume is zero");
    if (!cfg.allow_nonabundant) require(is_abundant(b), "perturbation set must be abundant");
    f.validate();

    SolutionSet sol = solve_torus(f, seed, cfg.tracker);
    require(is_bernstein_generic(f, sol, cfg.tracker), "base system is not Bernstein-generic");

    MonodromyReport rep;
    rep.fibre_size = static_cast<int>(sol.points.size());
    rep.loops_attempted = num_loops;
    for (int k = 0; k < num_loops; ++k) {
        LoopResult lr = monodromy_loop(f, b, sol.points, mix_seed(seed, 1000 + static_cast<std::uint64_t>(k)), cfg.tracker);
        if (lr.ok) rep.permutations.push_back(lr.permutation);
    }
    rep.loops_succeeded = static_cast<int>(rep.permutations.size());

    int m = rep.fibre_size;
    if (m == 0) return rep;

    std::vector<int> parent(static_cast<std::size_t>(m));
    std::iota(parent.begin(), parent.end(), 0);
    for (const auto& p : rep.permutations)
        for (int i = 0; i < m; ++i) unite(parent, i, p[static_cast<std::size_t>(i)]);
    int roots = 0;
    for (int i = 0; i < m; ++i)
        if (find_root(parent, i) == i) ++roots;
    rep.transitive = (roots == 1);

    if (m == 1) {
        rep.two_transitive = true;  // vacuous
        rep.transposition_seen = false;
        return rep;
    }

    // orbit count of the action on ordered pairs
    auto pair_id = [m](int i, int j) { return i * m + j; };
    std::vector<int> pp(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
    std::iota(pp.begin(), pp.end(), 0);
    for (const auto& p : rep.permutations)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i == j) continue;
                unite(pp, pair_id(i, j), pair_id(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]));
            }
    std::map<int, bool> distinct;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) distinct[find_root(pp, pair_id(i, j))] = true;
    rep.two_transitive = (distinct.size() == 1);

    for (const auto& p : rep.permutations)
        if (is_transposition(p)) rep.transposition_seen = true;
    if (!rep.transposition_seen) {
        for (std::size_t a = 0; a < rep.permutations.size() && !rep.transposition_seen; ++a)
            for (std::size_t bb = 0; bb < rep.permutations.size(); ++bb) {
                if (is_transposition(compose(rep.permutations[a], invert(rep.permutations[bb])))) {
                    rep.transposition_seen = true;
                    break;
                }
            }
    }
    return rep;
}

}  // namespace sparsetrace
