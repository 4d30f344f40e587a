#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "sparsetrace/solver.hpp"
#include "sparsetrace/tracetest.hpp"

namespace sparsetrace {

using Json = nlohmann::json;

Json to_json(const SupportCollection& c);
SupportCollection collection_from_json(const Json& j);

Json to_json(const SparseSystem& f);
SparseSystem system_from_json(const Json& j);

Json to_json(const SolutionSet& s);
SolutionSet solutions_from_json(const Json& j);

Json to_json(const TraceReport& r);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace sparsetrace
