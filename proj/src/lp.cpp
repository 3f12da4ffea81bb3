#include "emle/lp.hpp"

#include <cmath>
#include <limits>

#include "emle/error.hpp"

namespace emle {

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

// Working state over the augmented system [A | I] x = b with b >= 0. Columns
// n..n+m-1 are the phase-one artificials.
class Simplex {
public:
    Simplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const LpTolerances& tol)
        : a_(a), b_(b), tol_(tol), m_(a.rows()), n_(a.cols()) {
        basis_.resize(static_cast<std::size_t>(m_));
        is_basic_.assign(static_cast<std::size_t>(n_ + m_), false);
        for (Eigen::Index r = 0; r < m_; ++r) {
            basis_[static_cast<std::size_t>(r)] = n_ + r;
            is_basic_[static_cast<std::size_t>(n_ + r)] = true;
        }
        binv_ = Eigen::MatrixXd::Identity(m_, m_);
        xb_ = b_;
    }

    Eigen::VectorXd column(Eigen::Index j) const {
        if (j < n_) return a_.col(j);
        return Eigen::VectorXd::Unit(m_, j - n_);
    }

    enum class Outcome { optimal, unbounded };

    // Maximizes cost^T x over the current basis. Columns with
    // enterable[j] == false never enter.
    Outcome optimize(const Eigen::VectorXd& cost, const std::vector<bool>& enterable) {
        while (true) {
            if (pivots_ >= tol_.max_iterations)
                throw NumericalError("simplex iteration limit reached");
            Eigen::VectorXd cb(m_);
            for (Eigen::Index r = 0; r < m_; ++r) cb(r) = cost(basis_[static_cast<std::size_t>(r)]);
            const Eigen::RowVectorXd y = cb.transpose() * binv_;

            // Bland: lowest-index improving column enters.
            Eigen::Index entering = -1;
            for (Eigen::Index j = 0; j < n_ + m_; ++j) {
                if (is_basic_[static_cast<std::size_t>(j)] || !enterable[static_cast<std::size_t>(j)]) continue;
                const double reduced = cost(j) - (j < n_ ? y.dot(a_.col(j)) : y(j - n_));
                if (reduced > tol_.reduced_cost) {
                    entering = j;
                    break;
                }
            }
            if (entering < 0) return Outcome::optimal;

            const Eigen::VectorXd u = binv_ * column(entering);
            Eigen::Index leave_row = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (Eigen::Index r = 0; r < m_; ++r) {
                if (u(r) <= tol_.pivot) continue;
                const double ratio = std::max(xb_(r), 0.0) / u(r);
                const bool better = ratio < best_ratio - 1e-12;
                const bool tie = !better && ratio <= best_ratio + 1e-12;
                // Bland: among tied rows the lowest-index basic variable leaves.
                if (better || (tie && basis_[static_cast<std::size_t>(r)] <
                                          basis_[static_cast<std::size_t>(leave_row)])) {
                    if (better) best_ratio = ratio;
                    leave_row = r;
                }
            }
            if (leave_row < 0) return Outcome::unbounded;
            pivot(leave_row, entering, u);
        }
    }

    void pivot(Eigen::Index row, Eigen::Index entering, const Eigen::VectorXd& u) {
        const double piv = u(row);
        const double step = xb_(row) / piv;
        xb_ -= step * u;
        xb_(row) = step;
        const Eigen::RowVectorXd pivot_row = binv_.row(row) / piv;
        for (Eigen::Index r = 0; r < m_; ++r) {
            if (r == row) continue;
            if (u(r) != 0.0) binv_.row(r) -= u(r) * pivot_row;
        }
        binv_.row(row) = pivot_row;

        is_basic_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(row)])] = false;
        basis_[static_cast<std::size_t>(row)] = entering;
        is_basic_[static_cast<std::size_t>(entering)] = true;
        if (++pivots_ % tol_.refactor_every == 0) refactor();
    }

    void refactor() {
        Eigen::MatrixXd bmat(m_, m_);
        for (Eigen::Index r = 0; r < m_; ++r) bmat.col(r) = column(basis_[static_cast<std::size_t>(r)]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(bmat);
        if (!lu.isInvertible()) throw NumericalError("simplex basis became singular");
        binv_ = lu.inverse();
        xb_ = binv_ * b_;
    }

    // Pivots basic artificials out at zero level where some original column
    // has a usable entry in their row; the rest belong to redundant rows.
    void drive_out_artificials() {
        for (Eigen::Index r = 0; r < m_; ++r) {
            if (basis_[static_cast<std::size_t>(r)] < n_) continue;
            const Eigen::RowVectorXd row = binv_.row(r) * a_;
            for (Eigen::Index j = 0; j < n_; ++j) {
                if (is_basic_[static_cast<std::size_t>(j)] || std::abs(row(j)) <= 1e-9) continue;
                pivot(r, j, binv_ * a_.col(j));
                break;
            }
        }
    }

    Eigen::VectorXd solution() const {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n_ + m_);
        for (Eigen::Index r = 0; r < m_; ++r) x(basis_[static_cast<std::size_t>(r)]) = xb_(r);
        return x;
    }

    std::size_t pivots() const { return pivots_; }

private:
    const Eigen::MatrixXd& a_;
    const Eigen::VectorXd& b_;
    const LpTolerances& tol_;
    Eigen::Index m_;
    Eigen::Index n_;
    std::vector<Eigen::Index> basis_;
    std::vector<bool> is_basic_;
    Eigen::MatrixXd binv_;
    Eigen::VectorXd xb_;
    std::size_t pivots_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const LpTolerances& tol) {
    const Eigen::Index m = lp.constraints.rows();
    const Eigen::Index n = lp.constraints.cols();
    if (lp.objective.size() != n || lp.rhs.size() != m)
        throw DataError("linear program dimensions are inconsistent");
    if (!lp.constraints.allFinite() || !lp.rhs.allFinite() || !lp.objective.allFinite())
        throw DataError("linear program has non-finite entries");

    // Row signs flipped so that the artificial basis starts feasible.
    Eigen::MatrixXd a = lp.constraints;
    Eigen::VectorXd b = lp.rhs;
    for (Eigen::Index r = 0; r < m; ++r) {
        if (b(r) < 0) {
            a.row(r) *= -1.0;
            b(r) = -b(r);
        }
    }

    Simplex simplex(a, b, tol);
    LpSolution out;

    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
    phase1.tail(m).setConstant(-1.0);
    std::vector<bool> enterable(static_cast<std::size_t>(n + m), true);
    simplex.optimize(phase1, enterable);
    simplex.refactor();

    const Eigen::VectorXd x1 = simplex.solution();
    const double scale = m == 0 ? 1.0 : std::max(1.0, b.cwiseAbs().maxCoeff());
    if (x1.tail(m).sum() > tol.feasibility * scale * static_cast<double>(std::max<Eigen::Index>(m, 1))) {
        out.status = LpStatus::infeasible;
        out.pivots = simplex.pivots();
        return out;
    }
    simplex.drive_out_artificials();

    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
    phase2.head(n) = lp.objective;
    for (Eigen::Index j = n; j < n + m; ++j) enterable[static_cast<std::size_t>(j)] = false;
    const auto outcome = simplex.optimize(phase2, enterable);
    out.pivots = simplex.pivots();
    if (outcome == Simplex::Outcome::unbounded) {
        out.status = LpStatus::unbounded;
        out.objective_value = std::numeric_limits<double>::infinity();
        return out;
    }
    simplex.refactor();

    const Eigen::VectorXd x = simplex.solution();
    out.point = x.head(n);
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(out.point(i)) <= 1e-14) out.point(i) = 0.0;
    if (out.point.size() > 0 && out.point.minCoeff() < -tol.feasibility)
        throw NumericalError("simplex returned a point with negative entries");
    const double residual = m == 0 ? 0.0 : (lp.constraints * out.point - lp.rhs).cwiseAbs().maxCoeff();
    if (residual > tol.feasibility * scale)
        throw NumericalError("simplex solution violates constraints by " + std::to_string(residual));

    out.status = LpStatus::optimal;
    out.objective_value = lp.objective.dot(out.point);
    for (Eigen::Index i = 0; i < n; ++i)
        if (out.point(i) > tol.support) out.support.push_back(static_cast<std::size_t>(i));
    return out;
}

}  // namespace emle
