#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emle/design.hpp"
#include "emle/facial_set.hpp"
#include "emle/formula.hpp"
#include "emle/linalg.hpp"
#include "emle/table.hpp"

namespace emle {

struct FitOptions {
    std::size_t max_iterations = 100;
    // Converged once ||X^T (n - m)||_inf <= gradient_tolerance * max(1, N).
    double gradient_tolerance = 1e-10;
    RankTolerance rank;
    // Order in which design columns are offered to the independent-column
    // selection; defaults to canonical column order (lower-order terms win).
    std::optional<std::vector<std::size_t>> column_preference;
};

// Newton iterations for log m = X theta under Poisson sampling.
struct PoissonFit {
    Eigen::VectorXd theta;
    Eigen::VectorXd means;
    double loglik = 0.0;
    double gradient_norm = 0.0;  // infinity norm at the returned point
    std::size_t iterations = 0;
    bool converged = false;
};

// `x` must have full column rank. Starts at theta = 0 with the intercept
// (when `intercept_column` is set) at log(N / rows).
PoissonFit fit_poisson(const Eigen::MatrixXd& x, const Eigen::VectorXd& counts,
                       std::optional<Eigen::Index> intercept_column, std::size_t max_iterations,
                       double gradient_tolerance);

struct Coefficient {
    std::string name;
    Term term;
    bool aliased = false;
    std::optional<double> estimate;
    std::optional<double> std_error;
};

struct FitResult {
    std::vector<double> fitted_means;  // per cell; zero off the facial set
    std::vector<Coefficient> coefficients;
    std::vector<std::size_t> estimable_columns;  // selected design columns
    std::vector<std::size_t> face_cells;
    double loglik = 0.0;
    double deviance = 0.0;
    double bic = 0.0;
    double cbic = 0.0;
    std::size_t model_dimension = 0;
    std::size_t face_dimension = 0;
    std::size_t residual_df = 0;
    std::size_t iterations = 0;
    Count total = 0;

    std::size_t num_aliased() const { return model_dimension - face_dimension; }
    // Terms owning at least one aliased column, canonically ordered.
    std::vector<Term> aliased_terms() const;
};

// Fits the model on the cells of the facial set only, treating the others as
// structural zeros, with a maximal independent subset of the design columns.
FitResult fit(const ContingencyTable& table, const DesignMatrix& design, const FacialSet& fs,
              const FitOptions& opts = {});
FitResult fit(const ContingencyTable& table, const ModelFormula& model, const FacialSet& fs,
              const FitOptions& opts = {});

// Fit on every cell with the full design; may fail to converge when the MLE
// does not exist.
PoissonFit fit_unrestricted(const ContingencyTable& table, const DesignMatrix& design,
                            const FitOptions& opts = {});

// sum n log m - sum m over all cells, with 0 log 0 = 0; -inf if a positive
// count has zero fitted mean.
double loglik(const FitResult& result, const ContingencyTable& table);
double bic(const FitResult& result, Count total);
double cbic(const FitResult& result, Count total);
std::vector<std::optional<double>> standard_errors(const FitResult& result);

// ||X*^T (m - n)||_inf over the estimable columns.
double moment_residual(const FitResult& result, const ContingencyTable& table, const DesignMatrix& design);

}  // namespace emle
