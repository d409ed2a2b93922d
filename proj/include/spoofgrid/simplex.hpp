#pragma once

#include <cstddef>
#include <vector>

namespace spoofgrid::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
    std::vector<double> coefficients;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

/// maximise c·x subject to the constraints and x >= 0.
///
/// Dense two-phase tableau simplex (Dantzig pricing, Bland's rule once it
/// stalls on degenerate pivots). Sized for the small
/// witness programs of alpha-vector pruning (tens of variables, hundreds of
/// rows at most).
Result maximize(const std::vector<double>& objective, const std::vector<Constraint>& constraints,
                double tolerance = 1e-9);

}  // namespace spoofgrid::lp
