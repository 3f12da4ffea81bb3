#include "emle/facial_set.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "emle/error.hpp"

namespace emle {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::initial_A_empty: return "initial_A_empty";
        case Termination::optimal_zero: return "optimal_zero";
        case Termination::all_cells_in_face: return "all_cells_in_face";
    }
    return "unknown";
}

std::size_t FacialSet::size() const {
    return static_cast<std::size_t>(std::count(in_face.begin(), in_face.end(), true));
}

std::vector<std::size_t> FacialSet::cells() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < in_face.size(); ++i)
        if (in_face[i]) out.push_back(i);
    return out;
}

std::vector<std::size_t> FacialSet::excluded_cells() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < in_face.size(); ++i)
        if (!in_face[i]) out.push_back(i);
    return out;
}

std::string FacialSet::status() const {
    switch (termination) {
        case Termination::initial_A_empty: return "No zero cells";
        case Termination::optimal_zero: return "Optimal objective value 0";
        case Termination::all_cells_in_face: return "All zero cells removed";
    }
    return "unknown";
}

LinearProgram facial_lp(const DesignMatrix& design, std::span<const Count> binary_counts,
                        const std::vector<bool>& in_a) {
    const auto& x = design.matrix();
    if (binary_counts.size() != static_cast<std::size_t>(x.rows()) || in_a.size() != binary_counts.size())
        throw DataError("facial LP inputs do not match the design rows");
    const auto t = sufficient_statistic(design, binary_counts);
    LinearProgram lp;
    lp.constraints = x.transpose();
    lp.rhs.resize(static_cast<Eigen::Index>(t.size()));
    for (std::size_t j = 0; j < t.size(); ++j) lp.rhs(static_cast<Eigen::Index>(j)) = static_cast<double>(t[j]);
    lp.objective = Eigen::VectorXd::Zero(x.rows());
    for (std::size_t i = 0; i < in_a.size(); ++i)
        if (in_a[i]) lp.objective(static_cast<Eigen::Index>(i)) = 1.0;
    return lp;
}

namespace {

void require_positive_total(const ContingencyTable& table) {
    if (table.total() <= 0) throw DataError("table has no positive counts");
}

// Solves `lp`, optionally with the variables presented in reverse order, and
// returns the point in the original order.
LpSolution solve_ordered(const LinearProgram& lp, const FacialSetOptions& opts) {
    if (!opts.reverse_variable_order) {
        auto sol = solve(lp, opts.lp);
        if (opts.on_solve) opts.on_solve(lp, sol);
        return sol;
    }
    LinearProgram rev = lp;
    rev.constraints = lp.constraints.rowwise().reverse();
    rev.objective = lp.objective.reverse();
    auto sol = solve(rev, opts.lp);
    if (sol.status == LpStatus::optimal) {
        sol.point = sol.point.reverse().eval();
        const auto n = static_cast<std::size_t>(lp.constraints.cols());
        for (auto& s : sol.support) s = n - 1 - s;
        std::sort(sol.support.begin(), sol.support.end());
    }
    if (opts.on_solve) opts.on_solve(lp, sol);
    return sol;
}

void check_solution(const LpSolution& sol, double t0, const LpTolerances& tol) {
    if (sol.status != LpStatus::optimal)
        throw NumericalError("facial-set LP reported " + to_string(sol.status) +
                             "; the observed table is always feasible");
    if (sol.objective_value > t0 + tol.support)
        throw NumericalError("facial-set LP objective exceeds the table total");
}

void finish(FacialSet& fs, const DesignMatrix& design, const FacialSetOptions& opts) {
    fs.model_dimension = design.dimension();
    const auto cells = fs.cells();
    fs.face_dimension = numerical_rank(design.rows(cells), opts.rank);
}

}  // namespace

FacialSet find_facial_set(const ContingencyTable& table, const DesignMatrix& design,
                          const FacialSetOptions& opts) {
    require_positive_total(table);
    const auto binary = table.binarize();
    const auto n = table.num_cells();

    FacialSet fs;
    std::vector<bool> in_a(n, false);
    std::size_t remaining = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (table.count(i) == 0) {
            in_a[i] = true;
            ++remaining;
        }

    if (remaining == 0) {
        fs.termination = Termination::initial_A_empty;
    } else {
        const double t0 = static_cast<double>(binary.total());
        while (true) {
            const auto lp = facial_lp(design, binary.counts(), in_a);
            const auto sol = solve_ordered(lp, opts);
            ++fs.iterations;
            check_solution(sol, t0, opts.lp);
            if (sol.objective_value <= opts.lp.support) {
                fs.termination = Termination::optimal_zero;
                break;
            }
            std::vector<std::size_t> removed;
            for (std::size_t i : sol.support)
                if (in_a[i]) removed.push_back(i);
            if (removed.empty()) {
                // z is positive but spread below the support threshold;
                // take the largest entry so A still shrinks.
                std::size_t best = n;
                for (std::size_t i = 0; i < n; ++i)
                    if (in_a[i] && (best == n || sol.point(static_cast<Eigen::Index>(i)) >
                                                     sol.point(static_cast<Eigen::Index>(best))))
                        best = i;
                removed.push_back(best);
            }
            for (std::size_t i : removed) in_a[i] = false;
            remaining -= removed.size();
            fs.removed_per_iteration.push_back(std::move(removed));
            if (remaining == 0) {
                fs.termination = Termination::all_cells_in_face;
                break;
            }
        }
    }

    fs.in_face.resize(n);
    for (std::size_t i = 0; i < n; ++i) fs.in_face[i] = !in_a[i];
    finish(fs, design, opts);
    return fs;
}

FacialSet find_facial_set(const ContingencyTable& table, const ModelFormula& model,
                          const FacialSetOptions& opts) {
    return find_facial_set(table, build_design(table, model, opts.rank), opts);
}

FacialSet per_cell_oracle(const ContingencyTable& table, const DesignMatrix& design,
                          const FacialSetOptions& opts) {
    require_positive_total(table);
    const auto binary = table.binarize();
    const auto n = table.num_cells();
    const double t0 = static_cast<double>(binary.total());

    std::vector<std::size_t> zeros;
    for (std::size_t i = 0; i < n; ++i)
        if (table.count(i) == 0) zeros.push_back(i);

    auto probe = [&](std::size_t cell) {
        std::vector<bool> only(n, false);
        only[cell] = true;
        const auto sol = solve_ordered(facial_lp(design, binary.counts(), only), opts);
        check_solution(sol, t0, opts.lp);
        return sol.objective_value > opts.lp.support;
    };

    std::vector<char> reachable(zeros.size(), 0);
    if (opts.parallel && zeros.size() > 1) {
        const std::size_t workers =
            std::min<std::size_t>(zeros.size(), std::max(1u, std::thread::hardware_concurrency()));
        std::vector<std::future<void>> jobs;
        for (std::size_t w = 0; w < workers; ++w)
            jobs.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t k = w; k < zeros.size(); k += workers) reachable[k] = probe(zeros[k]);
            }));
        for (auto& j : jobs) j.get();
    } else {
        for (std::size_t k = 0; k < zeros.size(); ++k) reachable[k] = probe(zeros[k]);
    }

    FacialSet fs;
    fs.in_face.assign(n, true);
    for (std::size_t k = 0; k < zeros.size(); ++k) fs.in_face[zeros[k]] = reachable[k] != 0;
    fs.iterations = zeros.size();
    if (zeros.empty())
        fs.termination = Termination::initial_A_empty;
    else if (std::all_of(reachable.begin(), reachable.end(), [](char r) { return r != 0; }))
        fs.termination = Termination::all_cells_in_face;
    else
        fs.termination = Termination::optimal_zero;
    finish(fs, design, opts);
    return fs;
}

FacialSet per_cell_oracle(const ContingencyTable& table, const ModelFormula& model,
                          const FacialSetOptions& opts) {
    return per_cell_oracle(table, build_design(table, model, opts.rank), opts);
}

}  // namespace emle
