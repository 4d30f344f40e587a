#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "sparsetrace/errors.hpp"
#include "sparsetrace/io.hpp"
#include "sparsetrace/tracetest.hpp"
#include "sparsetrace/version.hpp"

using namespace sparsetrace;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SPARSETRACE_SEED")) return std::strtoull(env, nullptr, 10);
    return 1;
}

struct Manifest {
    Json j;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    Manifest(const std::string& command, std::uint64_t seed) {
        j["command"] = command;
        j["seed"] = seed;
        j["version"] = kVersion;
        j["inputs"] = Json::object();
        j["config"] = Json::object();
    }
    void input(const std::string& path) { j["inputs"][path] = fnv1a_hex(slurp(path)); }
    void config(const std::string& key, const Json& v) { j["config"][key] = v; }
    void emit(const std::string& manifest_path) {
        Json with_time = j;
        with_time["wall_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                .count();
        std::cerr << with_time.dump() << "\n";
        if (!manifest_path.empty()) save_json_file(manifest_path, j);  // reproducible part only
    }
};

void deliver(const Json& out, const std::string& out_path) {
    if (out_path.empty())
        std::cout << out.dump(2) << "\n";
    else
        save_json_file(out_path, out);
}

Json json_rat(const Rat& r) { return rat_to_string(r); }

Json lattice_json(const SublatticeInfo& info) {
    Json j;
    j["rank"] = info.rank;
    Json f = Json::array();
    for (const auto& v : info.invariant_factors) f.push_back(to_long(v));
    j["invariant_factors"] = f;
    j["index"] = info.index ? Json(to_long(*info.index)) : Json("infinite");
    return j;
}

int cmd_analyze(const std::string& in, const std::string& out_path, const std::string& manifest_path) {
    Manifest man("analyze", 0);
    man.input(in);
    SupportCollection c = collection_from_json(load_json_file(in));
    Json rep;
    rep["n"] = c.ambient_dim();
    rep["count"] = c.count();
    rep["square"] = c.square();
    Json sizes = Json::array();
    for (const auto& s : c.supports()) sizes.push_back(s.size());
    rep["support_sizes"] = sizes;
    rep["collection_lattice"] = lattice_json(collection_lattice(c));
    rep["lacunary"] = is_lacunary(c);

    if (c.square()) {
        bool positive = has_positive_mixed_volume_by_defect(c);
        rep["mixed_volume_positive"] = positive;
        if (c.ambient_dim() <= 4) rep["mixed_volume"] = to_long(mixed_volume(c));
        auto w = is_triangular(c);
        rep["triangular"] = w.has_value();
        if (w) {
            rep["triangular_witness"] = *w;
            if (c.ambient_dim() <= 4 && positive) {
                Int sub = relative_mixed_volume(c, *w);
                Int full = mixed_volume(c);
                rep["strictly_triangular"] = (sub > 1 && sub < full);
            }
        }
        if (positive) {
            Json offsets = Json::array();
            for (int i = 0; i < c.count(); ++i) {
                Json row;
                row["at_0"] = to_json(SupportCollection(c.ambient_dim(), {offset(c[i], Rat(0))}))["supports"][0];
                row["at_half"] = to_json(SupportCollection(c.ambient_dim(), {offset(c[i], Rat(1, 2))}))["supports"][0];
                row["at_1"] = to_json(SupportCollection(c.ambient_dim(), {offset(c[i], Rat(1))}))["supports"][0];
                offsets.push_back(row);
            }
            rep["offsets"] = offsets;
            SupportCollection tal = trace_affine_candidate(c);
            SupportCollection inv = trace_invariant_candidate(c);
            rep["trace_affine_candidate"] = to_json(tal)["supports"];
            rep["trace_invariant_candidate"] = to_json(inv)["supports"];
            rep["trace_affine_candidate_abundant"] = is_abundant(tal);
            rep["trace_invariant_candidate_abundant"] = is_abundant(inv);
        }
    }
    deliver(rep, out_path);
    man.emit(manifest_path);
    return 0;
}

int cmd_mixedvol(const std::string& in, const std::string& out_path, const std::string& manifest_path) {
    Manifest man("mixedvol", 0);
    man.input(in);
    SupportCollection c = collection_from_json(load_json_file(in));
    Json rep;
    rep["mv"] = to_long(mixed_volume(c));
    deliver(rep, out_path);
    man.emit(manifest_path);
    return 0;
}

int cmd_random(const std::string& in, std::uint64_t seed, const std::string& out_path,
               const std::string& manifest_path) {
    Manifest man("random", seed);
    man.input(in);
    SupportCollection c = collection_from_json(load_json_file(in));
    deliver(to_json(random_system(c, seed)), out_path);
    man.emit(manifest_path);
    return 0;
}

int cmd_solve(const std::string& in, std::uint64_t seed, int jobs, const std::string& out_path,
              const std::string& manifest_path) {
    Manifest man("solve", seed);
    man.input(in);
    man.config("jobs", jobs);
    SparseSystem f = system_from_json(load_json_file(in));
    TrackerConfig cfg;
    cfg.jobs = jobs;
    deliver(to_json(solve_torus(f, seed, cfg)), out_path);
    man.emit(manifest_path);
    return 0;
}

int cmd_trace_test(const std::string& system_path, const std::string& solutions_path,
                   bool constant, const std::string& bset_path, std::uint64_t seed, double tol,
                   bool certified, bool allow_nonabundant, bool full_solve, int jobs,
                   const std::string& out_path, const std::string& manifest_path) {
    Manifest man(constant ? "trace-test --constant" : "trace-test", seed);
    man.input(system_path);
    man.input(solutions_path);
    man.config("tol", tol);
    man.config("constant", constant);
    man.config("certified_b", certified);
    man.config("allow_nonabundant", allow_nonabundant);

    SparseSystem f = system_from_json(load_json_file(system_path));
    SolutionSet sols = solutions_from_json(load_json_file(solutions_path));

    TraceConfig cfg;
    cfg.rel_tol = tol;
    cfg.b_certified = certified;
    cfg.allow_nonabundant = allow_nonabundant;
    cfg.full_solve_check = full_solve;
    cfg.tracker.jobs = jobs;

    SupportCollection b = bset_path.empty()
                              ? (constant ? trace_invariant_candidate(f.collection)
                                          : trace_affine_candidate(f.collection))
                              : collection_from_json(load_json_file(bset_path));
    if (!bset_path.empty()) man.input(bset_path);

    TraceReport rep = constant
                          ? constant_sparse_trace_test(f.collection, f, sols.points, b, seed, cfg)
                          : sparse_trace_test(f.collection, f, sols.points, b, seed, cfg);
    deliver(to_json(rep), out_path);
    man.emit(manifest_path);
    return rep.pass ? 0 : 1;
}

int cmd_experiments(const std::string& which, std::uint64_t seed, const std::string& data_dir,
                    const std::string& out_path, const std::string& manifest_path) {
    Manifest man("experiments " + which, seed);
    TrackerConfig tracker;
    TraceConfig cfg;
    Json rep;

    auto load_sys = [&](const std::string& name) {
        std::string path = data_dir + "/" + name;
        man.input(path);
        return system_from_json(load_json_file(path));
    };
    auto load_coll = [&](const std::string& name) {
        std::string path = data_dir + "/" + name;
        man.input(path);
        return collection_from_json(load_json_file(path));
    };

    if (which == "table1") {
        SparseSystem f = load_sys("sample_system_f.json");
        SparseSystem g = load_sys("sample_system_g.json");
        SegmentFamily fam = SegmentFamily::between(f, g);
        Json rows = Json::array();
        for (int t = 0; t <= 5; ++t) {
            SolutionSet s = solve_torus(fam.at(static_cast<double>(t)),
                                        mix_seed(seed, static_cast<std::uint64_t>(t)), tracker);
            Cx s1 = trace(s.points, 0);
            Cx s2 = trace(s.points, 1);
            Json row;
            row["t"] = t;
            row["count"] = s.certified_count;
            row["trace_1"] = Json{{"re", s1.real()}, {"im", s1.imag()}};
            row["trace_2"] = Json{{"re", s2.real()}, {"im", s2.imag()}};
            rows.push_back(row);
        }
        rep["pencil_traces"] = rows;
    } else if (which == "gallery") {
        // truncating the unnecessary coefficients preserves the first trace
        {
            std::vector<LatticePoint> pts;
            for (long a = 0; a <= 5; ++a)
                for (long b = 0; b + a <= 5; ++b) pts.push_back(LatticePoint{a, b});
            Support s5(2, pts);
            SupportCollection c(2, {s5, s5});
            SparseSystem f = random_system(c, seed);
            SupportCollection inv = trace_invariant_candidate(c);
            SparseSystem trimmed = f;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < s5.size(); ++j)
                    if (inv[i].contains(s5.points()[static_cast<std::size_t>(j)]))
                        trimmed.coefficients[static_cast<std::size_t>(i)][j] = Cx(0, 0);
            // drop the zeroed points entirely to expose the smaller count
            std::vector<Support> kept;
            std::vector<CVec> kept_coeffs;
            for (int i = 0; i < 2; ++i) {
                std::vector<LatticePoint> keep_pts;
                std::vector<Cx> keep_c;
                for (int j = 0; j < s5.size(); ++j)
                    if (!inv[i].contains(s5.points()[static_cast<std::size_t>(j)])) {
                        keep_pts.push_back(s5.points()[static_cast<std::size_t>(j)]);
                        keep_c.push_back(f.coefficients[static_cast<std::size_t>(i)][j]);
                    }
                kept.emplace_back(2, keep_pts);
                CVec v(static_cast<Eigen::Index>(keep_c.size()));
                for (std::size_t k = 0; k < keep_c.size(); ++k) v[static_cast<Eigen::Index>(k)] = keep_c[k];
                kept_coeffs.push_back(v);
            }
            SparseSystem trunc;
            trunc.collection = SupportCollection(2, kept);
            trunc.coefficients = kept_coeffs;
            SolutionSet full = solve_torus(f, seed, tracker);
            SolutionSet small = solve_torus(trunc, mix_seed(seed, 1), tracker);
            Cx t_full = trace(full.points, 0);
            Cx t_small = trace(small.points, 0);
            rep["truncation"] = Json{{"mv_full", to_long(full.mv)},
                                     {"mv_truncated", to_long(small.mv)},
                                     {"count_full", full.certified_count},
                                     {"count_truncated", small.certified_count},
                                     {"trace_gap", std::abs(t_full - t_small)}};
        }
        // multidegree boxes: mixed volume in closed form
        {
            Json rows = Json::array();
            for (long k1 = 1; k1 <= 4; ++k1)
                for (long k2 = 1; k2 <= 4; ++k2) {
                    std::vector<LatticePoint> r1, r2;
                    for (long a = 0; a <= k1; ++a)
                        for (long b = 0; b <= 2; ++b) r1.push_back(LatticePoint{a, b});
                    for (long a = 0; a <= k2; ++a)
                        for (long b = 0; b <= 1; ++b) r2.push_back(LatticePoint{a, b});
                    SupportCollection c(2, {Support(2, r1), Support(2, r2)});
                    rows.push_back(Json{{"k1", k1},
                                        {"k2", k2},
                                        {"mv", to_long(mixed_volume(c))},
                                        {"closed_form", k1 * 1 + k2 * 2}});
                }
            rep["rectangles"] = rows;
        }
        // lacunary and triangular shortcuts
        {
            SupportCollection lac = load_coll("lacunary_reducible_supports.json");
            LacunaryTraceReport lrep = lacunary_trace_check(lac, random_system(lac, seed), seed, cfg);
            rep["lacunary_factor"] = Json{{"index", to_long(lrep.index)},
                                          {"rel_err", lrep.rel_err},
                                          {"pass", lrep.pass}};
            SupportCollection tri = load_coll("triangular_threefold_supports.json");
            TriangularTraceReport trep =
                triangular_trace_check(tri, random_system(tri, seed), seed, cfg);
            rep["triangular_factor"] = Json{{"mv_full", to_long(trep.mv_full)},
                                            {"mv_sub", to_long(trep.mv_sub)},
                                            {"rel_err", trep.rel_err},
                                            {"pass", trep.pass}};
        }
        // a monomial change of coordinates identifies the trace of x1*x2^2
        {
            std::vector<LatticePoint> pts;
            for (long a = 0; a <= 2; ++a)
                for (long b = 0; b + a <= 2; ++b) pts.push_back(LatticePoint{a, b});
            Support s2(2, pts);
            SupportCollection c(2, {s2, s2});
            SparseSystem f = random_system(c, mix_seed(seed, 7));
            IMat shear(2, 2);
            shear.at(0, 0) = 1;
            shear.at(1, 0) = -2;
            shear.at(0, 1) = 0;
            shear.at(1, 1) = 1;
            MonomialMap sub{shear, 1};
            SparseSystem g = apply_monomial_map(f, sub);
            SolutionSet sf = solve_torus(f, mix_seed(seed, 8), tracker);
            SolutionSet sg = solve_torus(g, mix_seed(seed, 9), tracker);
            Cx direct = 0;
            for (const auto& p : sf.points) direct += p.x[0] * p.x[1] * p.x[1];
            Cx through = trace(sg.points, 0);
            rep["monomial_trace"] = Json{{"count", sf.certified_count},
                                         {"count_sheared", sg.certified_count},
                                         {"gap", std::abs(direct - through)}};
        }
    } else {
        throw PreconditionError("unknown experiment: " + which);
    }
    deliver(rep, out_path);
    man.emit(manifest_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse trace tests and support analysis for torus solution sets"};
    app.require_subcommand(1);

    std::string in_path, solutions_path, bset_path, out_path, manifest_path;
    std::string experiment = "table1";
    std::string data_dir = "data";
    std::uint64_t seed = default_seed();
    double tol = 1e-6;
    int jobs = 1;
    bool constant = false, certified = false, allow_nonabundant = false, full_solve = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "write the result to this file instead of stdout");
        sub->add_option("--manifest", manifest_path, "also write the reproducible run manifest here");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "support-collection report");
    analyze->add_option("supports", in_path)->required();
    add_common(analyze);

    CLI::App* mv = app.add_subcommand("mixedvol", "normalized mixed volume");
    mv->add_option("supports", in_path)->required();
    add_common(mv);

    CLI::App* rnd = app.add_subcommand("random", "random system over a support collection");
    rnd->add_option("supports", in_path)->required();
    rnd->add_option("--seed", seed);
    add_common(rnd);

    CLI::App* solve = app.add_subcommand("solve", "complete torus solution set");
    solve->add_option("system", in_path)->required();
    solve->add_option("--seed", seed);
    solve->add_option("--jobs", jobs);
    add_common(solve);

    CLI::App* tt = app.add_subcommand("trace-test", "completeness test for a solution subset");
    tt->add_option("system", in_path)->required();
    tt->add_option("solutions", solutions_path)->required();
    tt->add_flag("--constant", constant, "use the constant-trace variant");
    tt->add_option("--b-set", bset_path, "perturbation support file (default: offset candidate)");
    tt->add_option("--seed", seed);
    tt->add_option("--tol", tol);
    tt->add_flag("--certified-b", certified, "accept the perturbation set without the offset check");
    tt->add_flag("--allow-nonabundant", allow_nonabundant,
                 "run one-sided: skip the abundance requirement");
    tt->add_flag("--full-solve-check", full_solve, "certify genericity by a full solve");
    tt->add_option("--jobs", jobs);
    add_common(tt);

    CLI::App* exp = app.add_subcommand("experiments", "built-in experiment suites");
    exp->add_option("which", experiment, "table1 or gallery")->required();
    exp->add_option("--seed", seed);
    exp->add_option("--data-dir", data_dir, "directory holding the shipped fixture files");
    add_common(exp);

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(in_path, out_path, manifest_path);
        if (mv->parsed()) return cmd_mixedvol(in_path, out_path, manifest_path);
        if (rnd->parsed()) return cmd_random(in_path, seed, out_path, manifest_path);
        if (solve->parsed()) return cmd_solve(in_path, seed, jobs, out_path, manifest_path);
        if (tt->parsed())
            return cmd_trace_test(in_path, solutions_path, constant, bset_path, seed, tol,
                                  certified, allow_nonabundant, full_solve, jobs, out_path,
                                  manifest_path);
        if (exp->parsed()) return cmd_experiments(experiment, seed, data_dir, out_path, manifest_path);
    } catch (const TrackingAbort& e) {
        std::cerr << "abort: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
