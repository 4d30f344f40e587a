#include "sparsetrace/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sparsetrace/errors.hpp"

namespace sparsetrace {

void TrackerConfig::validate() const {
    if (!(0 < min_step && min_step < initial_step && initial_step <= 1.0))
        throw PreconditionError("tracker steps must satisfy 0 < min_step < initial_step <= 1");
    if (!(newton_tol > 0) || !(torus_floor > 0) || !(path_bound > 0))
        throw PreconditionError("tracker tolerances must be positive");
    if (max_newton_iters < 1 || jobs < 1) throw PreconditionError("tracker counts must be positive");
}

const char* to_string(PathStatus s) {
    switch (s) {
        case PathStatus::Success: return "success";
        case PathStatus::Diverged: return "diverged";
        case PathStatus::Singular: return "singular";
        case PathStatus::LeftTorus: return "left_torus";
        case PathStatus::StepUnderflow: return "step_underflow";
    }
    return "unknown";
}

namespace {

double inf_norm(const CVec& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

double cond_inf(const CMat& j) {
    Eigen::PartialPivLU<CMat> lu(j);
    CMat inv = lu.inverse();
    double a = j.cwiseAbs().rowwise().sum().maxCoeff();
    double b = inv.cwiseAbs().rowwise().sum().maxCoeff();
    return a * b;
}

// Guards against vacuous convergence: a residual only certifies a zero when
// it is small against the magnitude of the terms that produced it.
bool residual_meaningful(const SegmentFamily& fam, double t, const TorusPoint& p, const CVec& h) {
    Eigen::VectorXd sf = evaluation_scale(fam.f, p);
    Eigen::VectorXd sg = evaluation_scale(fam.g, p);
    double gs = fam.use_gamma ? std::abs(fam.gamma) : 1.0;
    for (int i = 0; i < h.size(); ++i) {
        double scale = std::abs(t) * sf[i] + std::abs(1.0 - t) * gs * sg[i];
        if (std::abs(h[i]) > 1e-6 * scale) return false;
    }
    return true;
}

enum class PointCheck { Ok, LeftTorus, Diverged };

PointCheck check_point(const CVec& x, const TrackerConfig& cfg) {
    for (int i = 0; i < x.size(); ++i) {
        double m = std::abs(x[i]);
        if (m <= cfg.torus_floor || std::isnan(m)) return PointCheck::LeftTorus;
        if (m >= cfg.path_bound) return PointCheck::Diverged;
    }
    return PointCheck::Ok;
}

struct NewtonResult {
    bool converged = false;
    bool singular = false;
    CVec x;
    double residual = 0.0;
    double correction = 0.0;
};

NewtonResult newton_at(const SegmentFamily& fam, double t, CVec x, const TrackerConfig& cfg) {
    NewtonResult r;
    r.x = x;
    double total = 0.0;
    double resid = std::numeric_limits<double>::infinity();
    if (check_point(r.x, cfg) != PointCheck::Ok) return r;
    resid = inf_norm(fam.eval(t, TorusPoint{r.x}));
    for (int it = 0; it < cfg.max_newton_iters; ++it) {
        r.residual = resid;
        if (resid <= cfg.newton_tol) {
            r.converged = true;
            r.correction = total;
            return r;
        }
        CMat j = fam.jac(t, TorusPoint{r.x});
        Eigen::PartialPivLU<CMat> lu(j);
        CVec dx = lu.solve(fam.eval(t, TorusPoint{r.x}));
        if (!dx.allFinite()) {
            r.singular = true;
            return r;
        }
        // backtracking keeps the iteration monotone near ill-conditioned
        // corners where the full step overshoots
        double lambda = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 6; ++bt) {
            CVec cand = r.x - lambda * dx;
            if (check_point(cand, cfg) == PointCheck::Ok) {
                double cand_res = inf_norm(fam.eval(t, TorusPoint{cand}));
                if (cand_res < resid) {
                    r.x = cand;
                    total += lambda * inf_norm(dx);
                    resid = cand_res;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!moved) {  // stagnated above tolerance
            r.residual = resid;
            r.correction = total;
            return r;
        }
    }
    r.residual = resid;
    r.correction = total;
    r.converged = resid <= cfg.newton_tol;
    return r;
}

}  // namespace

PathOutcome newton_polish(const SparseSystem& f, const TorusPoint& start, const TrackerConfig& cfg) {
    SegmentFamily fam;
    fam.f = f;
    fam.g = f;
    PathOutcome out;
    if (check_point(start.x, cfg) != PointCheck::Ok) {
        out.status = PathStatus::LeftTorus;
        return out;
    }
    NewtonResult r = newton_at(fam, 1.0, start.x, cfg);
    if (r.singular) {
        out.status = PathStatus::Singular;
        return out;
    }
    if (check_point(r.x, cfg) == PointCheck::LeftTorus) {
        out.status = PathStatus::LeftTorus;
        return out;
    }
    if (check_point(r.x, cfg) == PointCheck::Diverged) {
        out.status = PathStatus::Diverged;
        return out;
    }
    out.residual = r.residual;
    if (!r.converged) {
        out.status = PathStatus::Singular;
        return out;
    }
    if (!residual_meaningful(fam, 1.0, TorusPoint{r.x}, evaluate(f, TorusPoint{r.x}))) {
        out.status = PathStatus::Singular;
        return out;
    }
    out.cond_estimate = cond_inf(jacobian(f, TorusPoint{r.x}));
    if (!(out.cond_estimate < 1.0 / cfg.newton_tol)) {
        out.status = PathStatus::Singular;
        return out;
    }
    out.status = PathStatus::Success;
    out.end = TorusPoint{r.x};
    return out;
}

PathOutcome track_segment(const SegmentFamily& family, const TorusPoint& start,
                          double from_t, double to_t, const TrackerConfig& cfg) {
    cfg.validate();
    PathOutcome out;
    if (check_point(start.x, cfg) != PointCheck::Ok) {
        out.status = PathStatus::LeftTorus;
        return out;
    }

    const double span = to_t - from_t;
    double s = 0.0;            // arc parameter in [0, 1]
    double ds = cfg.initial_step;
    CVec x = start.x;
    bool last_fail_singular = false;

    auto derivative = [&](double sv, const CVec& xv, CVec& dx) -> bool {
        TorusPoint p{xv};
        CMat j = family.jac(from_t + sv * span, p);
        Eigen::PartialPivLU<CMat> lu(j);
        dx = lu.solve(-span * family.eval_dt(p));
        return dx.allFinite();
    };

    while (s < 1.0 && span != 0.0) {
        double step = std::min(ds, 1.0 - s);
        // fourth-order predictor on the Davidenko system; near-singular
        // intermediate stages degrade to a tangent step instead of feeding
        // garbage into the corrector
        CVec k1, k2, k3, k4;
        bool ok = derivative(s, x, k1);
        double speed = ok ? inf_norm(k1) : 0.0;
        CVec xp;
        if (ok) {
            auto stage_ok = [&](const CVec& k) {
                return k.allFinite() && inf_norm(k) <= 10.0 * (speed + 1.0);
            };
            bool rk = check_point(x + (step / 2) * k1, cfg) == PointCheck::Ok &&
                      derivative(s + step / 2, x + (step / 2) * k1, k2) && stage_ok(k2);
            rk = rk && check_point(x + (step / 2) * k2, cfg) == PointCheck::Ok &&
                 derivative(s + step / 2, x + (step / 2) * k2, k3) && stage_ok(k3);
            rk = rk && check_point(x + step * k3, cfg) == PointCheck::Ok &&
                 derivative(s + step, x + step * k3, k4) && stage_ok(k4);
            xp = rk ? CVec(x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
                    : CVec(x + step * k1);
            PointCheck pc = check_point(xp, cfg);
            if (pc == PointCheck::Diverged) {
                out.status = PathStatus::Diverged;
                return out;
            }
            if (pc != PointCheck::Ok) ok = false;
        }
        if (ok) {
            double predictor_move = inf_norm(xp - x);
            double expected_move = step * speed;
            double slack = 1e-12 * (1.0 + inf_norm(x));
            // a prediction that disagrees wildly with the tangent is unsound
            if (predictor_move > 4.0 * expected_move + slack) {
                ok = false;
            } else {
                NewtonResult nr = newton_at(family, from_t + (s + step) * span, xp, cfg);
                // path-crossing guard: corrections must stay well inside the
                // intended step
                if (nr.converged && nr.correction <= 0.5 * expected_move + slack) {
                    PointCheck pc = check_point(nr.x, cfg);
                    if (pc == PointCheck::Diverged) {
                        out.status = PathStatus::Diverged;
                        return out;
                    }
                    if (pc == PointCheck::Ok) {
                        x = nr.x;
                        s += step;
                        ++out.steps_taken;
                        if (nr.correction <= 0.1 * expected_move + slack)
                            ds = std::min(cfg.initial_step, ds * cfg.step_expand);
                        last_fail_singular = false;
                        continue;
                    }
                }
                last_fail_singular = nr.singular;
            }
        } else {
            last_fail_singular = true;
        }
        ds *= cfg.step_contract;
        if (ds < cfg.min_step) {
            out.status = last_fail_singular ? PathStatus::Singular : PathStatus::StepUnderflow;
            return out;
        }
    }

    NewtonResult fin = newton_at(family, to_t, x, cfg);
    out.residual = fin.residual;
    if (fin.singular || !fin.converged) {
        out.status = PathStatus::Singular;
        return out;
    }
    if (!residual_meaningful(family, to_t, TorusPoint{fin.x}, family.eval(to_t, TorusPoint{fin.x}))) {
        out.status = PathStatus::Singular;
        return out;
    }
    PointCheck pc = check_point(fin.x, cfg);
    if (pc == PointCheck::LeftTorus) {
        out.status = PathStatus::LeftTorus;
        return out;
    }
    if (pc == PointCheck::Diverged) {
        out.status = PathStatus::Diverged;
        return out;
    }
    TorusPoint endp{fin.x};
    out.cond_estimate = cond_inf(family.jac(to_t, endp));
    if (!(out.cond_estimate < 1.0 / cfg.newton_tol)) {
        out.status = PathStatus::Singular;
        return out;
    }
    out.status = PathStatus::Success;
    out.end = endp;
    return out;
}

bool TrackSetResult::all_success() const {
    for (const auto& o : outcomes)
        if (!o.success()) return false;
    return !outcomes.empty();
}

std::vector<TorusPoint> TrackSetResult::endpoints() const {
    std::vector<TorusPoint> pts;
    for (const auto& o : outcomes)
        if (o.success()) pts.push_back(*o.end);
    return pts;
}

TrackSetResult track_set(const SegmentFamily& family, const std::vector<TorusPoint>& starts,
                         double from_t, double to_t, const TrackerConfig& cfg) {
    cfg.validate();
    for (std::size_t i = 0; i < starts.size(); ++i)
        for (std::size_t j = i + 1; j < starts.size(); ++j)
            if (inf_norm(starts[i].x - starts[j].x) <= 1e-8)
                throw PreconditionError("duplicate start point in track_set");
    for (const auto& p : starts) {
        NewtonResult chk = newton_at(family, from_t, p.x, cfg);
        if (!chk.converged || inf_norm(chk.x - p.x) > 1e-6)
            throw PreconditionError("start point does not satisfy the family at from_t");
    }

    TrackSetResult res;
    res.outcomes.resize(starts.size());
    int jobs = std::max(1, cfg.jobs);
    if (jobs == 1 || starts.size() <= 1) {
        for (std::size_t i = 0; i < starts.size(); ++i)
            res.outcomes[i] = track_segment(family, starts[i], from_t, to_t, cfg);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (starts.size() + static_cast<std::size_t>(jobs) - 1) / static_cast<std::size_t>(jobs);
        for (int w = 0; w < jobs; ++w) {
            std::size_t lo = static_cast<std::size_t>(w) * chunk;
            std::size_t hi = std::min(starts.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi]() {
                for (std::size_t i = lo; i < hi; ++i)
                    res.outcomes[i] = track_segment(family, starts[i], from_t, to_t, cfg);
            });
        }
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < starts.size(); ++i) {
        if (!res.outcomes[i].success()) continue;
        for (std::size_t j = i + 1; j < starts.size(); ++j) {
            if (!res.outcomes[j].success()) continue;
            if (inf_norm(res.outcomes[i].end->x - res.outcomes[j].end->x) <= 1e-8)
                res.crossings.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return res;
}

LoopResult monodromy_loop(const SparseSystem& base, const SupportCollection& b,
                          const std::vector<TorusPoint>& fibre, std::uint64_t seed,
                          const TrackerConfig& cfg) {
    if (fibre.empty()) throw PreconditionError("empty fibre");
    Rng rng(seed);
    Rng r1 = rng.fork(1), r2 = rng.fork(2);
    SparseSystem g1 = resample_on(base, b, r1);
    SparseSystem g2 = resample_on(base, b, r2);

    LoopResult out;
    std::vector<TorusPoint> pts = fibre;
    const SparseSystem* corners[4] = {&base, &g1, &g2, &base};
    for (int leg = 0; leg < 3; ++leg) {
        SegmentFamily fam = SegmentFamily::between(*corners[leg + 1], *corners[leg]);
        TrackSetResult tr = track_set(fam, pts, 0.0, 1.0, cfg);
        if (!tr.all_success() || !tr.crossings.empty()) {
            for (const auto& o : tr.outcomes)
                if (!o.success()) ++out.failed_paths;
            out.note = "path failure on loop edge " + std::to_string(leg);
            return out;
        }
        pts = tr.endpoints();
    }

    // match endpoints back to the fibre
    int m = static_cast<int>(fibre.size());
    out.permutation.assign(static_cast<std::size_t>(m), -1);
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    for (int i = 0; i < m; ++i) {
        double best = std::numeric_limits<double>::infinity();
        double second = best;
        int arg = -1;
        for (int j = 0; j < m; ++j) {
            double d = inf_norm(pts[static_cast<std::size_t>(i)].x - fibre[static_cast<std::size_t>(j)].x);
            if (d < best) {
                second = best;
                best = d;
                arg = j;
            } else if (d < second) {
                second = d;
            }
        }
        if (m > 1 && !(best < 0.1 * second)) {
            out.note = "ambiguous endpoint match";
            return out;
        }
        if (arg < 0 || used[static_cast<std::size_t>(arg)]) {
            out.note = "endpoint matching is not a bijection";
            return out;
        }
        used[static_cast<std::size_t>(arg)] = true;
        out.permutation[static_cast<std::size_t>(i)] = arg;
    }
    out.ok = true;
    return out;
}

}  // namespace sparsetrace
