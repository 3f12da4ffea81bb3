#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace emle {

struct LpTolerances {
    double feasibility = 1e-9;  // absolute, on constraint residuals
    double support = 1e-8;      // a(i) counts as positive above this
    double pivot = 1e-11;       // smallest usable pivot element
    double reduced_cost = 1e-10;
    std::size_t max_iterations = 200000;
    std::size_t refactor_every = 64;
};

// maximize c^T a  subject to  A a = b,  a >= 0.
struct LinearProgram {
    Eigen::VectorXd objective;
    Eigen::MatrixXd constraints;
    Eigen::VectorXd rhs;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective_value = 0.0;
    Eigen::VectorXd point;              // basic feasible solution when optimal
    std::vector<std::size_t> support;   // indices with point(i) > support tolerance
    std::size_t pivots = 0;
};

// Two-phase revised simplex with Bland's rule. Pivoting is deterministic, so
// identical programs yield identical vertices.
LpSolution solve(const LinearProgram& lp, const LpTolerances& tol = {});

}  // namespace emle
