#include "emle/linalg.hpp"

#include <algorithm>
#include <limits>

#include "emle/error.hpp"

namespace emle {

double RankTolerance::threshold(const Eigen::MatrixXd& m, double sigma_max) const {
    if (relative) return *relative * sigma_max;
    return static_cast<double>(m.cols()) * std::numeric_limits<double>::epsilon() * sigma_max;
}

std::size_t numerical_rank(const Eigen::MatrixXd& m, const RankTolerance& tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double cut = tol.threshold(m, s(0));
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

std::vector<std::size_t> select_independent_columns(const Eigen::MatrixXd& m,
                                                    const std::vector<std::size_t>& preference,
                                                    const RankTolerance& tol) {
    std::vector<std::size_t> kept;
    if (m.size() == 0) return kept;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const double sigma_max = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    if (sigma_max == 0.0) return kept;
    // A column is dependent when its residual after projection is tiny
    // relative to its own norm; the absolute floor mirrors the SVD cut.
    const double abs_floor = tol.threshold(m, sigma_max);

    std::vector<Eigen::VectorXd> basis;
    for (std::size_t j : preference) {
        if (j >= static_cast<std::size_t>(m.cols())) throw NumericalError("column preference out of range");
        Eigen::VectorXd v = m.col(static_cast<Eigen::Index>(j));
        const double norm0 = v.norm();
        if (norm0 <= abs_floor) continue;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) v -= q.dot(v) * q;
        const double resid = v.norm();
        const double rel = tol.relative.value_or(
            std::max<double>(static_cast<double>(m.rows()), static_cast<double>(m.cols())) * 1e3 *
            std::numeric_limits<double>::epsilon());
        if (resid <= rel * norm0 || resid <= abs_floor) continue;
        basis.push_back(v / resid);
        kept.push_back(j);
    }
    return kept;
}

}  // namespace emle
