#include "sparsetrace/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "sparsetrace/errors.hpp"

namespace sparsetrace {

Json to_json(const SupportCollection& c) {
    Json j;
    j["n"] = c.ambient_dim();
    Json arr = Json::array();
    for (const auto& s : c.supports()) {
        Json pts = Json::array();
        for (const auto& p : s.points()) {
            Json coords = Json::array();
            for (const auto& v : p.coords) coords.push_back(to_long(v));
            pts.push_back(coords);
        }
        arr.push_back(pts);
    }
    j["supports"] = arr;
    return j;
}

SupportCollection collection_from_json(const Json& j) {
    if (!j.contains("n") || !j.contains("supports"))
        throw PreconditionError("support file needs fields 'n' and 'supports'");
    int n = j.at("n").get<int>();
    std::vector<Support> supports;
    for (const auto& pts : j.at("supports")) {
        std::vector<LatticePoint> points;
        for (const auto& coords : pts) {
            std::vector<Int> v;
            for (const auto& e : coords) v.emplace_back(e.get<long>());
            if (static_cast<int>(v.size()) != n)
                throw PreconditionError("support point has wrong dimension");
            points.emplace_back(std::move(v));
        }
        supports.emplace_back(n, std::move(points));
    }
    return SupportCollection(n, std::move(supports));
}

namespace {

Json complex_to_json(const Cx& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Cx complex_from_json(const Json& j) {
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

}  // namespace

Json to_json(const SparseSystem& f) {
    Json j;
    j["collection"] = to_json(f.collection);
    Json blocks = Json::array();
    for (const auto& c : f.coefficients) {
        Json block = Json::array();
        for (int i = 0; i < c.size(); ++i) block.push_back(complex_to_json(c[i]));
        blocks.push_back(block);
    }
    j["coefficients"] = blocks;
    return j;
}

SparseSystem system_from_json(const Json& j) {
    SparseSystem f;
    f.collection = collection_from_json(j.at("collection"));
    for (const auto& block : j.at("coefficients")) {
        CVec c(static_cast<Eigen::Index>(block.size()));
        Eigen::Index i = 0;
        for (const auto& e : block) c[i++] = complex_from_json(e);
        f.coefficients.push_back(std::move(c));
    }
    f.validate();
    return f;
}

Json to_json(const SolutionSet& s) {
    Json j;
    Json pts = Json::array();
    for (const auto& p : s.points) {
        Json coords = Json::array();
        for (int i = 0; i < p.dim(); ++i) coords.push_back(complex_to_json(p.x[i]));
        pts.push_back(coords);
    }
    j["points"] = pts;
    j["residuals"] = s.residuals;
    j["mv"] = to_long(s.mv);
    j["certified_count"] = s.certified_count;
    j["possibly_incomplete"] = s.possibly_incomplete;
    j["multiplicity_flag"] = s.multiplicity_flag;
    j["failed_paths"] = s.failed_paths;
    return j;
}

SolutionSet solutions_from_json(const Json& j) {
    SolutionSet s;
    for (const auto& coords : j.at("points")) {
        CVec x(static_cast<Eigen::Index>(coords.size()));
        Eigen::Index i = 0;
        for (const auto& e : coords) x[i++] = complex_from_json(e);
        s.points.emplace_back(std::move(x));
    }
    if (j.contains("residuals")) s.residuals = j.at("residuals").get<std::vector<double>>();
    if (j.contains("mv")) s.mv = Int(j.at("mv").get<long>());
    if (j.contains("certified_count")) s.certified_count = j.at("certified_count").get<int>();
    s.certified_count = static_cast<int>(s.points.size());
    return s;
}

Json to_json(const TraceReport& r) {
    Json j;
    j["algorithm"] = r.algorithm;
    Json samples = Json::array();
    for (const auto& [t, v] : r.samples)
        samples.push_back(Json{{"t", t}, {"trace", complex_to_json(v)}});
    j["samples"] = samples;
    j["collinearity_residual"] = r.collinearity_residual;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["tolerance"] = r.tol;
    j["seed"] = r.seed;
    j["genericity_mode"] = r.genericity_mode;
    j["notes"] = r.notes;
    Json statuses = Json::array();
    for (auto s : r.path_statuses) statuses.push_back(to_string(s));
    j["path_statuses"] = statuses;
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open file: " + path);
    Json j;
    in >> j;  // nlohmann reports the byte position on parse errors
    return j;
}

void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace sparsetrace
