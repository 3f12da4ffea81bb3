#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace emle {

// Relative rank threshold. When unset, singular values below
// cols * eps * sigma_max count as zero.
struct RankTolerance {
    std::optional<double> relative;

    double threshold(const Eigen::MatrixXd& m, double sigma_max) const;
};

std::size_t numerical_rank(const Eigen::MatrixXd& m, const RankTolerance& tol = {});

// Greedy pivoted Gram-Schmidt: visits columns in `preference` order and keeps
// each one that is not in the span of those already kept. Returns kept
// column indices in visiting order.
std::vector<std::size_t> select_independent_columns(const Eigen::MatrixXd& m,
                                                    const std::vector<std::size_t>& preference,
                                                    const RankTolerance& tol = {});

}  // namespace emle
