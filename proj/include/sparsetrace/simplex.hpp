#pragma once

#include <vector>

#include "sparsetrace/numeric.hpp"

namespace sparsetrace {

// Exact rational linear program in equality standard form:
//   maximize c.x  subject to  A x = b, x >= 0.
// Dense two-phase tableau simplex with Bland's rule.
struct LpResult {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    Rat value;
    std::vector<Rat> solution;
};

LpResult lp_maximize(const std::vector<std::vector<Rat>>& a,
                     const std::vector<Rat>& b,
                     const std::vector<Rat>& c);

}  // namespace sparsetrace
