#include "emle/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "emle/error.hpp"

namespace emle {

namespace {

double poisson_loglik(const Eigen::VectorXd& counts, const Eigen::VectorXd& eta) {
    double l = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        if (counts(i) != 0.0) l += counts(i) * eta(i);
        l -= std::exp(eta(i));
    }
    return l;
}

}  // namespace

PoissonFit fit_poisson(const Eigen::MatrixXd& x, const Eigen::VectorXd& counts,
                       std::optional<Eigen::Index> intercept_column, std::size_t max_iterations,
                       double gradient_tolerance) {
    const double total = counts.sum();
    const double tol = gradient_tolerance * std::max(1.0, total);

    PoissonFit out;
    out.theta = Eigen::VectorXd::Zero(x.cols());
    if (intercept_column && total > 0 && x.rows() > 0)
        out.theta(*intercept_column) = std::log(total / static_cast<double>(x.rows()));

    Eigen::VectorXd eta = x * out.theta;
    out.loglik = poisson_loglik(counts, eta);
    while (true) {
        out.means = eta.array().exp().matrix();
        const Eigen::VectorXd grad = x.transpose() * (counts - out.means);
        out.gradient_norm = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
        if (out.gradient_norm <= tol) {
            out.converged = true;
            break;
        }
        if (out.iterations >= max_iterations) break;

        const Eigen::MatrixXd info = x.transpose() * out.means.asDiagonal() * x;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        if (ldlt.info() != Eigen::Success) break;
        const Eigen::VectorXd step = ldlt.solve(grad);
        if (!step.allFinite()) break;

        // Step halving until the likelihood does not decrease.
        double scale = 1.0;
        Eigen::VectorXd theta_new;
        Eigen::VectorXd eta_new;
        double l_new = -std::numeric_limits<double>::infinity();
        for (int halvings = 0; halvings < 40; ++halvings, scale *= 0.5) {
            theta_new = out.theta + scale * step;
            eta_new = x * theta_new;
            l_new = poisson_loglik(counts, eta_new);
            if (std::isfinite(l_new) && l_new >= out.loglik - 1e-12 * std::abs(out.loglik)) break;
        }
        if (!std::isfinite(l_new)) break;
        out.theta = theta_new;
        eta = eta_new;
        out.loglik = l_new;
        ++out.iterations;
    }
    return out;
}

std::vector<Term> FitResult::aliased_terms() const {
    std::set<Term> terms;
    for (const auto& c : coefficients)
        if (c.aliased) terms.insert(c.term);
    return {terms.begin(), terms.end()};
}

FitResult fit(const ContingencyTable& table, const DesignMatrix& design, const FacialSet& fs,
              const FitOptions& opts) {
    const auto n_cells = table.num_cells();
    if (table.total() <= 0) throw DataError("table has no positive counts");
    if (fs.in_face.size() != n_cells || design.num_rows() != n_cells)
        throw DataError("facial set does not match the table");
    for (std::size_t i = 0; i < n_cells; ++i)
        if (table.count(i) > 0 && !fs.in_face[i])
            throw DataError("facial set excludes cell " + table.cell_label(i) + " which has a positive count");

    FitResult r;
    r.face_cells = fs.cells();
    r.model_dimension = design.dimension();
    r.total = table.total();

    const Eigen::MatrixXd x_face = design.rows(r.face_cells);
    std::vector<std::size_t> preference(design.dimension());
    std::iota(preference.begin(), preference.end(), std::size_t{0});
    if (opts.column_preference) {
        preference = *opts.column_preference;
        auto sorted = preference;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> all(design.dimension());
        std::iota(all.begin(), all.end(), std::size_t{0});
        if (sorted != all) throw DataError("column preference must be a permutation of the design columns");
    }
    r.estimable_columns = select_independent_columns(x_face, preference, opts.rank);
    r.face_dimension = r.estimable_columns.size();
    if (r.face_dimension != fs.face_dimension)
        throw NumericalError("selected " + std::to_string(r.face_dimension) +
                             " independent columns but the face has dimension " +
                             std::to_string(fs.face_dimension));

    Eigen::MatrixXd x_star(x_face.rows(), static_cast<Eigen::Index>(r.face_dimension));
    std::optional<Eigen::Index> intercept;
    for (std::size_t k = 0; k < r.estimable_columns.size(); ++k) {
        x_star.col(static_cast<Eigen::Index>(k)) = x_face.col(static_cast<Eigen::Index>(r.estimable_columns[k]));
        if (r.estimable_columns[k] == 0) intercept = static_cast<Eigen::Index>(k);
    }
    Eigen::VectorXd n_face(static_cast<Eigen::Index>(r.face_cells.size()));
    for (std::size_t k = 0; k < r.face_cells.size(); ++k)
        n_face(static_cast<Eigen::Index>(k)) = static_cast<double>(table.count(r.face_cells[k]));

    const auto pf = fit_poisson(x_star, n_face, intercept, opts.max_iterations, opts.gradient_tolerance);
    if (!pf.converged)
        throw NumericalError("Newton iterations did not converge within " +
                             std::to_string(opts.max_iterations) + " steps (gradient " +
                             std::to_string(pf.gradient_norm) + ")");
    r.iterations = pf.iterations;

    r.fitted_means.assign(n_cells, 0.0);
    for (std::size_t k = 0; k < r.face_cells.size(); ++k)
        r.fitted_means[r.face_cells[k]] = pf.means(static_cast<Eigen::Index>(k));

    // Inverse Fisher information for the estimable parameters.
    std::vector<std::optional<double>> se(r.face_dimension);
    {
        const Eigen::MatrixXd info = x_star.transpose() * pf.means.asDiagonal() * x_star;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
        if (lu.isInvertible()) {
            const Eigen::MatrixXd cov = lu.inverse();
            for (std::size_t k = 0; k < se.size(); ++k) {
                const double v = cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
                if (std::isfinite(v) && v > 0) se[k] = std::sqrt(v);
            }
        }
    }

    r.coefficients.resize(design.dimension());
    for (std::size_t j = 0; j < design.dimension(); ++j) {
        r.coefficients[j].name = design.columns()[j].name;
        r.coefficients[j].term = design.columns()[j].term;
        r.coefficients[j].aliased = true;
    }
    for (std::size_t k = 0; k < r.estimable_columns.size(); ++k) {
        auto& c = r.coefficients[r.estimable_columns[k]];
        c.aliased = false;
        c.estimate = pf.theta(static_cast<Eigen::Index>(k));
        c.std_error = se[k];
    }

    r.loglik = loglik(r, table);
    r.deviance = 0.0;
    for (std::size_t i : r.face_cells) {
        const double n = static_cast<double>(table.count(i));
        const double m = r.fitted_means[i];
        r.deviance += 2.0 * ((n > 0 ? n * std::log(n / m) : 0.0) - (n - m));
    }
    r.deviance = std::max(r.deviance, 0.0);
    r.residual_df = r.face_cells.size() - r.face_dimension;
    r.bic = bic(r, r.total);
    r.cbic = cbic(r, r.total);
    return r;
}

FitResult fit(const ContingencyTable& table, const ModelFormula& model, const FacialSet& fs,
              const FitOptions& opts) {
    return fit(table, build_design(table, model, opts.rank), fs, opts);
}

PoissonFit fit_unrestricted(const ContingencyTable& table, const DesignMatrix& design, const FitOptions& opts) {
    Eigen::VectorXd counts(static_cast<Eigen::Index>(table.num_cells()));
    for (std::size_t i = 0; i < table.num_cells(); ++i)
        counts(static_cast<Eigen::Index>(i)) = static_cast<double>(table.count(i));
    return fit_poisson(design.matrix(), counts, Eigen::Index{0}, opts.max_iterations, opts.gradient_tolerance);
}

double loglik(const FitResult& result, const ContingencyTable& table) {
    if (result.fitted_means.size() != table.num_cells()) throw DataError("fit does not match the table");
    double l = 0.0;
    for (std::size_t i = 0; i < table.num_cells(); ++i) {
        const double n = static_cast<double>(table.count(i));
        const double m = result.fitted_means[i];
        if (n > 0) {
            if (m <= 0) return -std::numeric_limits<double>::infinity();
            l += n * std::log(m);
        }
        l -= m;
    }
    return l;
}

double bic(const FitResult& result, Count total) {
    return result.loglik - 0.5 * static_cast<double>(result.model_dimension) * std::log(static_cast<double>(total));
}

double cbic(const FitResult& result, Count total) {
    return result.loglik - 0.5 * static_cast<double>(result.face_dimension) * std::log(static_cast<double>(total));
}

std::vector<std::optional<double>> standard_errors(const FitResult& result) {
    std::vector<std::optional<double>> out;
    out.reserve(result.coefficients.size());
    for (const auto& c : result.coefficients) out.push_back(c.aliased ? std::nullopt : c.std_error);
    return out;
}

double moment_residual(const FitResult& result, const ContingencyTable& table, const DesignMatrix& design) {
    double worst = 0.0;
    for (std::size_t j : result.estimable_columns) {
        double s = 0.0;
        for (std::size_t i : result.face_cells)
            if (design.entry(i, j)) s += result.fitted_means[i] - static_cast<double>(table.count(i));
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

}  // namespace emle
