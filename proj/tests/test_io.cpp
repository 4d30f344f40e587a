#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "helpers.hpp"
#include "sparsetrace/errors.hpp"
#include "sparsetrace/io.hpp"

using namespace sparsetrace;
using namespace sparsetrace::testing;

TEST_CASE("support collections round trip through json") {
    Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Support> sup;
        for (int i = 0; i < 2; ++i) {
            std::set<std::pair<long, long>> seen;
            std::vector<LatticePoint> pts;
            int count = 1 + static_cast<int>(rng.raw() % 6);
            for (int k = 0; k < count; ++k) {
                long a = static_cast<long>(rng.raw() % 9) - 4;
                long b = static_cast<long>(rng.raw() % 9) - 4;
                if (seen.insert({a, b}).second) pts.push_back(LatticePoint{a, b});
            }
            sup.emplace_back(2, std::move(pts));
        }
        SupportCollection c(2, sup);
        CHECK(collection_from_json(to_json(c)) == c);
    }
}

TEST_CASE("systems round trip through json") {
    SparseSystem f = load_system("sample_system_f.json");
    SparseSystem back = system_from_json(to_json(f));
    CHECK(back.collection == f.collection);
    for (int i = 0; i < f.equations(); ++i)
        CHECK(back.coefficients[static_cast<std::size_t>(i)] ==
              f.coefficients[static_cast<std::size_t>(i)]);
}

TEST_CASE("solution sets round trip through json") {
    TrackerConfig cfg;
    SparseSystem f = load_system("sample_system_f.json");
    SolutionSet s = solve_torus(f, 5, cfg);
    SolutionSet back = solutions_from_json(to_json(s));
    REQUIRE(back.points.size() == s.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i)
        CHECK((back.points[i].x - s.points[i].x).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(back.mv == s.mv);
}

TEST_CASE("malformed files raise parse errors") {
    std::string path = "/tmp/sparsetrace_bad.json";
    {
        std::ofstream out(path);
        out << "{ \"n\": 2, \"supports\": [[[0,0],";
    }
    CHECK_THROWS(load_json_file(path));
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_json_file("/nonexistent/missing.json"), PreconditionError);
    CHECK_THROWS_AS(collection_from_json(Json::object()), PreconditionError);
}

TEST_CASE("digest is stable") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("sparse") == fnv1a_hex("sparse"));
    CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
}
