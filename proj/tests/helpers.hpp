#pragma once

#include <initializer_list>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "sparsetrace/io.hpp"
#include "sparsetrace/tracetest.hpp"

namespace sparsetrace::testing {

inline std::string data_path(const std::string& name) {
    return std::string(SPARSETRACE_DATA_DIR) + "/" + name;
}

inline Support sup2(std::initializer_list<std::pair<long, long>> pts) {
    std::vector<LatticePoint> v;
    for (auto [a, b] : pts) v.push_back(LatticePoint{a, b});
    return Support(2, std::move(v));
}

inline SupportCollection coll(std::vector<Support> s) {
    int n = s.front().ambient_dim();
    return SupportCollection(n, std::move(s));
}

// lattice points of the dilated standard simplex d*D_n
inline Support simplex_points(int n, long d) {
    std::vector<LatticePoint> pts;
    std::vector<long> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        long total = 0;
        for (long v : idx) total += v;
        if (total <= d) {
            std::vector<Int> c(idx.begin(), idx.end());
            pts.emplace_back(std::move(c));
        }
        int k = n - 1;
        while (k >= 0 && idx[static_cast<std::size_t>(k)] == d) idx[static_cast<std::size_t>(k--)] = 0;
        if (k < 0) break;
        ++idx[static_cast<std::size_t>(k)];
    }
    return Support(n, std::move(pts));
}

inline Support rectangle_points(long k, long l) {
    std::vector<LatticePoint> pts;
    for (long a = 0; a <= k; ++a)
        for (long b = 0; b <= l; ++b) pts.push_back(LatticePoint{a, b});
    return Support(2, std::move(pts));
}

inline SparseSystem load_system(const std::string& name) {
    return system_from_json(load_json_file(data_path(name)));
}

inline SupportCollection load_collection(const std::string& name) {
    return collection_from_json(load_json_file(data_path(name)));
}

// support families used across the random-system tests: nonlacunary,
// nontriangular, mixed volumes between 3 and 20, and with abundant offset
// candidates so the trace tests apply in strict mode
inline std::vector<SupportCollection> corpus_families() {
    std::vector<SupportCollection> out;
    out.push_back(coll({simplex_points(2, 2), simplex_points(2, 2)}));      // MV 4
    out.push_back(coll({simplex_points(2, 3), simplex_points(2, 2)}));      // MV 6
    out.push_back(coll({rectangle_points(2, 2), rectangle_points(2, 1)}));  // MV 6
    out.push_back(load_collection("sample_supports.json"));                 // MV 17
    Support s3 = simplex_points(3, 2);
    out.push_back(SupportCollection(3, {s3, s3, s3}));                      // MV 8
    return out;
}

}  // namespace sparsetrace::testing
