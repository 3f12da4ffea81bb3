#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emle/formula.hpp"
#include "emle/linalg.hpp"
#include "emle/table.hpp"

namespace emle {

// Identifies a design column: a model term plus one non-baseline level per
// factor of the term (levels listed in the term's factor order).
struct ColumnLabel {
    Term term;
    std::vector<std::size_t> levels;
    std::string name;  // e.g. "a1:b2", or "(Intercept)"
};

// Baseline-coded 0/1 design matrix: one row f_i per cell in table order,
// intercept column first, then terms in canonical order, then level
// combinations lexicographically (last factor fastest).
class DesignMatrix {
public:
    const Eigen::MatrixXd& matrix() const { return x_; }
    const std::vector<ColumnLabel>& columns() const { return columns_; }
    std::size_t dimension() const { return columns_.size(); }
    std::size_t num_rows() const { return static_cast<std::size_t>(x_.rows()); }
    bool entry(std::size_t cell, std::size_t col) const {
        return x_(static_cast<Eigen::Index>(cell), static_cast<Eigen::Index>(col)) != 0.0;
    }

    // Rows restricted to the given cells, in the given order.
    Eigen::MatrixXd rows(std::span<const std::size_t> cells) const;

    friend DesignMatrix build_design(const ContingencyTable&, const ModelFormula&, const RankTolerance&);

private:
    Eigen::MatrixXd x_;
    std::vector<ColumnLabel> columns_;
};

DesignMatrix build_design(const ContingencyTable& table, const ModelFormula& model,
                          const RankTolerance& tol = {});

// t = X^T counts, in exact integer arithmetic.
std::vector<Count> sufficient_statistic(const DesignMatrix& x, std::span<const Count> counts);

// Delimited dump: cell factor levels followed by one column per parameter.
void write_design(std::ostream& out, const ContingencyTable& table, const DesignMatrix& x);

}  // namespace emle
