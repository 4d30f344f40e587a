#include "sparsetrace/solver.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sparsetrace/errors.hpp"

namespace sparsetrace {

namespace {

// lexicographic order on (re, im) coordinate lists, for canonical output
bool point_less(const TorusPoint& a, const TorusPoint& b) {
    for (int i = 0; i < a.dim(); ++i) {
        if (a.x[i].real() != b.x[i].real()) return a.x[i].real() < b.x[i].real();
        if (a.x[i].imag() != b.x[i].imag()) return a.x[i].imag() < b.x[i].imag();
    }
    return false;
}

double point_dist(const TorusPoint& a, const TorusPoint& b) {
    return (a.x - b.x).lpNorm<Eigen::Infinity>();
}

}  // namespace

SolutionSet solve_torus(const SparseSystem& f, std::uint64_t seed, const TrackerConfig& cfg) {
    f.validate();
    if (!f.square()) throw PreconditionError("solve_torus needs a square system");
    int n = f.vars();

    SolutionSet out;
    out.mv = mixed_volume(f.collection);
    for (int i = 0; i < n; ++i)
        if (f.zero_row(i)) {
            out.possibly_incomplete = out.mv > 0;
            return out;
        }

    // translate exponents to be nonnegative; torus zeros are unchanged
    std::vector<Support> shifted;
    for (int i = 0; i < n; ++i) {
        const Support& s = f.collection[i];
        LatticePoint m = s.min_corner();
        for (auto& v : m.coords) v = -v;
        shifted.push_back(s.translated(m));
    }

    std::vector<long> degrees(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Int d = 0;
        for (const auto& p : shifted[static_cast<std::size_t>(i)].points()) {
            Int tot = 0;
            for (const auto& v : p.coords) tot += v;
            d = std::max(d, tot);
        }
        if (d <= 0) throw PreconditionError("constant equation has no torus zeros");
        degrees[static_cast<std::size_t>(i)] = to_long(d);
    }

    // embed the target and the start system x_i^{d_i} - 1 over one collection
    std::vector<Support> joint;
    for (int i = 0; i < n; ++i) {
        std::vector<LatticePoint> pts = shifted[static_cast<std::size_t>(i)].points();
        LatticePoint zero{std::vector<Int>(static_cast<std::size_t>(n))};
        LatticePoint top{std::vector<Int>(static_cast<std::size_t>(n))};
        top.coords[static_cast<std::size_t>(i)] = degrees[static_cast<std::size_t>(i)];
        if (std::find(pts.begin(), pts.end(), zero) == pts.end()) pts.push_back(zero);
        if (std::find(pts.begin(), pts.end(), top) == pts.end()) pts.push_back(top);
        joint.emplace_back(n, std::move(pts));
    }
    SupportCollection joint_c(n, std::move(joint));

    SparseSystem target, start;
    target.collection = joint_c;
    start.collection = joint_c;
    for (int i = 0; i < n; ++i) {
        const Support& js = joint_c[i];
        CVec tc = CVec::Zero(js.size());
        CVec sc = CVec::Zero(js.size());
        const Support& orig = shifted[static_cast<std::size_t>(i)];
        for (int j = 0; j < orig.size(); ++j)
            tc[js.index_of(orig.points()[static_cast<std::size_t>(j)])] =
                f.coefficients[static_cast<std::size_t>(i)][j];
        LatticePoint zero{std::vector<Int>(static_cast<std::size_t>(n))};
        LatticePoint top{std::vector<Int>(static_cast<std::size_t>(n))};
        top.coords[static_cast<std::size_t>(i)] = degrees[static_cast<std::size_t>(i)];
        sc[js.index_of(zero)] = Cx(-1.0, 0.0);
        sc[js.index_of(top)] = Cx(1.0, 0.0);
        target.coefficients.push_back(std::move(tc));
        start.coefficients.push_back(std::move(sc));
    }

    SegmentFamily fam = SegmentFamily::between(std::move(target), std::move(start));
    fam.use_gamma = true;

    long total = 1;
    for (long d : degrees) total *= d;

    std::vector<TorusPoint> raw;
    std::vector<double> raw_cond;
    const double pi2 = 6.283185307179586476925286766559;
    std::vector<long> counter(static_cast<std::size_t>(n), 0);

    std::vector<TorusPoint> starts;
    starts.reserve(static_cast<std::size_t>(total));
    for (long k = 0; k < total; ++k) {
        CVec x(n);
        for (int i = 0; i < n; ++i) {
            double ang = pi2 * static_cast<double>(counter[static_cast<std::size_t>(i)]) /
                         static_cast<double>(degrees[static_cast<std::size_t>(i)]);
            x[i] = Cx(std::cos(ang), std::sin(ang));
        }
        starts.emplace_back(x);
        for (int i = n - 1; i >= 0; --i) {
            if (++counter[static_cast<std::size_t>(i)] < degrees[static_cast<std::size_t>(i)]) break;
            counter[static_cast<std::size_t>(i)] = 0;
        }
    }

    // Track every start; when endpoints merge or paths fail while the count
    // is short of the mixed volume, retrack the suspects with tighter steps.
    // A merged endpoint usually means one path hopped sheets during a close
    // encounter, which a finer step resolves.
    std::vector<TorusPoint> pts;
    std::vector<double> res, conds;
    int leftover = 0;
    bool duplicate_seen = false;

    enum class Absorb { New, Duplicate, Bad };
    auto absorb = [&](const TorusPoint& endpoint) {
        PathOutcome p = newton_polish(f, endpoint, cfg);
        if (!p.success() || !p.end->in_torus(1e-8)) return Absorb::Bad;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (point_dist(*p.end, pts[j]) <= 1e-8) return Absorb::Duplicate;
        pts.push_back(*p.end);
        res.push_back(p.residual);
        conds.push_back(p.cond_estimate);
        return Absorb::New;
    };

    // Paths are retried first with tighter steps (close encounters where a
    // path hops onto a neighbouring sheet are resolved by finer stepping),
    // then along a fresh random deformation arc.
    for (int arc = 0; arc < 3 && Int(static_cast<long>(pts.size())) < out.mv; ++arc) {
        fam.gamma = Rng(mix_seed(seed, static_cast<std::uint64_t>(arc) * 101)).unit_circle();
        std::vector<int> pending(starts.size());
        std::iota(pending.begin(), pending.end(), 0);
        TrackerConfig attempt_cfg = cfg;
        for (int escalation = 0; escalation < 3 && !pending.empty(); ++escalation) {
            // fan the tracking out, then absorb serially in index order so
            // the result does not depend on the worker count
            std::vector<PathOutcome> outcomes(pending.size());
            int jobs = std::max(1, cfg.jobs);
            if (jobs == 1 || pending.size() <= 1) {
                for (std::size_t k = 0; k < pending.size(); ++k)
                    outcomes[k] = track_segment(
                        fam, starts[static_cast<std::size_t>(pending[k])], 0.0, 1.0, attempt_cfg);
            } else {
                std::vector<std::thread> pool;
                std::size_t chunk =
                    (pending.size() + static_cast<std::size_t>(jobs) - 1) / static_cast<std::size_t>(jobs);
                for (int w = 0; w < jobs; ++w) {
                    std::size_t lo = static_cast<std::size_t>(w) * chunk;
                    std::size_t hi = std::min(pending.size(), lo + chunk);
                    if (lo >= hi) break;
                    pool.emplace_back([&, lo, hi]() {
                        for (std::size_t k = lo; k < hi; ++k)
                            outcomes[k] = track_segment(
                                fam, starts[static_cast<std::size_t>(pending[k])], 0.0, 1.0, attempt_cfg);
                    });
                }
                for (auto& th : pool) th.join();
            }
            std::vector<int> unresolved;
            for (std::size_t k = 0; k < pending.size(); ++k) {
                const PathOutcome& o = outcomes[k];
                Absorb got = Absorb::Bad;
                if (o.success() && o.end->in_torus(1e-8)) got = absorb(*o.end);
                if (got == Absorb::Duplicate) duplicate_seen = true;
                if (got != Absorb::New) unresolved.push_back(pending[k]);
            }
            pending = std::move(unresolved);
            if (Int(static_cast<long>(pts.size())) >= out.mv) break;
            attempt_cfg.initial_step /= 8.0;
            attempt_cfg.min_step = std::min(attempt_cfg.min_step, attempt_cfg.initial_step / 1e6);
        }
        leftover = static_cast<int>(pending.size());
    }
    // unresolved paths cover both the excess start-system paths (which
    // diverge or leave the torus by design) and any persistently stuck ones
    out.failed_paths = leftover;
    if (Int(static_cast<long>(pts.size())) < out.mv && duplicate_seen) out.multiplicity_flag = true;

    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return point_less(pts[a], pts[b]); });
    for (std::size_t i : order) {
        out.points.push_back(pts[i]);
        out.residuals.push_back(res[i]);
        out.cond_estimates.push_back(conds[i]);
    }
    out.certified_count = static_cast<int>(out.points.size());
    out.possibly_incomplete = Int(out.certified_count) < out.mv;
    return out;
}

bool is_bernstein_generic(const SparseSystem& f, const SolutionSet& solved,
                          const TrackerConfig& cfg) {
    (void)f;
    if (Int(solved.certified_count) != solved.mv) return false;
    for (double c : solved.cond_estimates)
        if (!(c < 1.0 / cfg.newton_tol)) return false;
    return true;
}

}  // namespace sparsetrace
