#include "emle/design.hpp"

#include <ostream>

#include "emle/error.hpp"

namespace emle {

Eigen::MatrixXd DesignMatrix::rows(std::span<const std::size_t> cells) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(cells.size()), x_.cols());
    for (std::size_t r = 0; r < cells.size(); ++r)
        out.row(static_cast<Eigen::Index>(r)) = x_.row(static_cast<Eigen::Index>(cells[r]));
    return out;
}

DesignMatrix build_design(const ContingencyTable& table, const ModelFormula& model,
                          const RankTolerance& tol) {
    for (const auto& name : model.factor_names())
        if (!table.has_factor(name)) throw DataError("model references unknown factor '" + name + "'");

    DesignMatrix d;
    for (const auto& term : model.terms()) {
        std::vector<std::size_t> pos;
        for (const auto& f : term.factors()) pos.push_back(table.factor_position(f));

        // Non-baseline levels 1..L-1 of each factor, last factor fastest.
        std::size_t combos = 1;
        for (std::size_t p : pos) combos *= table.factors()[p].size() - 1;
        for (std::size_t c = 0; c < combos; ++c) {
            std::vector<std::size_t> levels(pos.size());
            std::size_t rest = c;
            for (std::size_t k = pos.size(); k-- > 0;) {
                const std::size_t base = table.factors()[pos[k]].size() - 1;
                levels[k] = 1 + rest % base;
                rest /= base;
            }
            ColumnLabel label{term, levels, {}};
            if (term.is_intercept()) {
                label.name = "(Intercept)";
            } else {
                for (std::size_t k = 0; k < pos.size(); ++k) {
                    if (k > 0) label.name += ':';
                    label.name += term.factors()[k] + table.factors()[pos[k]].levels[levels[k]];
                }
            }
            d.columns_.push_back(std::move(label));
        }
    }

    const auto n_cells = static_cast<Eigen::Index>(table.num_cells());
    const auto n_cols = static_cast<Eigen::Index>(d.columns_.size());
    d.x_ = Eigen::MatrixXd::Zero(n_cells, n_cols);
    std::vector<std::vector<std::size_t>> col_pos(d.columns_.size());
    for (std::size_t j = 0; j < d.columns_.size(); ++j)
        for (const auto& f : d.columns_[j].term.factors()) col_pos[j].push_back(table.factor_position(f));

    for (Eigen::Index cell = 0; cell < n_cells; ++cell) {
        const auto idx = table.cell_index(static_cast<std::size_t>(cell));
        for (Eigen::Index j = 0; j < n_cols; ++j) {
            const auto& col = d.columns_[static_cast<std::size_t>(j)];
            const auto& pos = col_pos[static_cast<std::size_t>(j)];
            bool hit = true;
            for (std::size_t k = 0; k < pos.size() && hit; ++k) hit = idx[pos[k]] == col.levels[k];
            if (hit) d.x_(cell, j) = 1.0;
        }
    }

    const auto rank = numerical_rank(d.x_, tol);
    if (rank != d.columns_.size())
        throw NumericalError("design matrix has rank " + std::to_string(rank) + " < " +
                             std::to_string(d.columns_.size()) + " columns");
    return d;
}

std::vector<Count> sufficient_statistic(const DesignMatrix& x, std::span<const Count> counts) {
    if (counts.size() != x.num_rows())
        throw DataError("count vector length " + std::to_string(counts.size()) +
                        " does not match design rows " + std::to_string(x.num_rows()));
    std::vector<Count> t(x.dimension(), 0);
    for (std::size_t cell = 0; cell < counts.size(); ++cell) {
        if (counts[cell] == 0) continue;
        for (std::size_t j = 0; j < t.size(); ++j)
            if (x.entry(cell, j)) t[j] += counts[cell];
    }
    return t;
}

void write_design(std::ostream& out, const ContingencyTable& table, const DesignMatrix& x) {
    for (const auto& f : table.factors()) out << f.name << ',';
    for (std::size_t j = 0; j < x.dimension(); ++j) out << (j ? "," : "") << x.columns()[j].name;
    out << '\n';
    for (std::size_t cell = 0; cell < table.num_cells(); ++cell) {
        const auto idx = table.cell_index(cell);
        for (std::size_t k = 0; k < idx.size(); ++k) out << table.factors()[k].levels[idx[k]] << ',';
        for (std::size_t j = 0; j < x.dimension(); ++j) out << (j ? "," : "") << (x.entry(cell, j) ? 1 : 0);
        out << '\n';
    }
}

}  // namespace emle
