#pragma once

#include <functional>
#include <string>
#include <vector>

#include "emle/design.hpp"
#include "emle/formula.hpp"
#include "emle/linalg.hpp"
#include "emle/lp.hpp"
#include "emle/table.hpp"

namespace emle {

enum class Termination {
    initial_A_empty,    // no zero cells
    optimal_zero,       // LP optimum reached z = 0
    all_cells_in_face,  // every zero cell was removed from A
};

std::string to_string(Termination t);

struct FacialSetOptions {
    LpTolerances lp;
    RankTolerance rank;
    // Present LP variables in reverse cell order; the facial set must not
    // depend on it.
    bool reverse_variable_order = false;
    // Oracle only: solve per-cell programs on worker threads.
    bool parallel = false;
    // Called after every LP solve with the program and its solution (in
    // cell order). Must be thread-safe when `parallel` is set.
    std::function<void(const LinearProgram&, const LpSolution&)> on_solve;
};

struct FacialSet {
    std::vector<bool> in_face;  // per cell, table order
    std::size_t face_dimension = 0;
    std::size_t model_dimension = 0;
    std::size_t iterations = 0;  // LP solves
    Termination termination = Termination::initial_A_empty;
    std::vector<std::vector<std::size_t>> removed_per_iteration;

    std::size_t size() const;
    std::vector<std::size_t> cells() const;
    std::vector<std::size_t> excluded_cells() const;
    // Status line in the style of the reference package output.
    std::string status() const;
};

// Repeated linear programming over the binarized sufficient statistic:
// start with A = zero cells, maximize the mass on A subject to X^T a = t',
// drop every cell of A that the optimal vertex makes positive, and stop when
// the optimum is zero or A is exhausted.
FacialSet find_facial_set(const ContingencyTable& table, const DesignMatrix& design,
                          const FacialSetOptions& opts = {});
FacialSet find_facial_set(const ContingencyTable& table, const ModelFormula& model,
                          const FacialSetOptions& opts = {});

// Independent check: one LP per zero cell, maximizing that cell alone.
FacialSet per_cell_oracle(const ContingencyTable& table, const DesignMatrix& design,
                          const FacialSetOptions& opts = {});
FacialSet per_cell_oracle(const ContingencyTable& table, const ModelFormula& model,
                          const FacialSetOptions& opts = {});

inline bool mle_exists(const FacialSet& fs) {
    for (bool b : fs.in_face)
        if (!b) return false;
    return true;
}

// The LP  max sum_{i in A} a(i)  s.t.  X^T a = t',  a >= 0.
LinearProgram facial_lp(const DesignMatrix& design, std::span<const Count> binary_counts,
                        const std::vector<bool>& in_a);

}  // namespace emle
