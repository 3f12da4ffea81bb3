#pragma once

// Test-only helpers: random sparse tables and an LP oracle by vertex
// enumeration. Nothing here calls into the simplex code.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "emle/formula.hpp"
#include "emle/table.hpp"

namespace emle::testing {

struct Instance {
    ContingencyTable table;
    ModelFormula model;
    std::string label;
};

inline std::vector<FactorSpec> binaryish_factors(const std::vector<std::size_t>& sizes) {
    static const char* names[] = {"a", "b", "c", "d"};
    std::vector<FactorSpec> out;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        FactorSpec f{names[k], {}};
        for (std::size_t l = 0; l < sizes[k]; ++l) f.levels.push_back(std::to_string(l));
        out.push_back(std::move(f));
    }
    return out;
}

// Shapes 2x2x2, 2x2x3, 3x3; counts zero with probability `zero_prob`, else
// uniform on 1..5; never an all-zero table.
inline Instance random_instance(std::mt19937_64& rng, double zero_prob = 0.4) {
    static const std::vector<std::vector<std::size_t>> shapes = {{2, 2, 2}, {2, 2, 3}, {3, 3}};
    static const std::vector<std::string> three_way = {"[a][b][c]", "[ab][c]", "[ab][bc]", "[ab][bc][ac]"};
    static const std::vector<std::string> two_way = {"[a][b]", "[ab]"};

    std::uniform_int_distribution<std::size_t> pick_shape(0, shapes.size() - 1);
    const auto& shape = shapes[pick_shape(rng)];
    auto factors = binaryish_factors(shape);
    std::size_t cells = 1;
    for (auto s : shape) cells *= s;

    std::bernoulli_distribution is_zero(zero_prob);
    std::uniform_int_distribution<Count> value(1, 5);
    std::vector<Count> counts(cells);
    do {
        for (auto& c : counts) c = is_zero(rng) ? 0 : value(rng);
    } while (std::all_of(counts.begin(), counts.end(), [](Count c) { return c == 0; }));

    const auto& models = shape.size() == 3 ? three_way : two_way;
    std::uniform_int_distribution<std::size_t> pick_model(0, models.size() - 1);
    const auto& gen = models[pick_model(rng)];

    std::string label;
    for (std::size_t k = 0; k < shape.size(); ++k) label += (k ? "x" : "") + std::to_string(shape[k]);
    label += " " + gen;
    return {ContingencyTable(std::move(factors), std::move(counts)), parse_generators(gen), label};
}

struct VertexOracleResult {
    bool feasible = false;
    double best = -std::numeric_limits<double>::infinity();
};

// max c^T x s.t. A x = b, x >= 0, by enumerating every column subset whose
// columns are independent and solving for the basic solution. Only valid for
// bounded programs.
inline VertexOracleResult enumerate_vertices(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                             const Eigen::VectorXd& c) {
    VertexOracleResult out;
    const auto n = a.cols();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<Eigen::Index> cols;
        for (Eigen::Index j = 0; j < n; ++j)
            if (mask & (1u << j)) cols.push_back(j);
        Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);

        Eigen::VectorXd x;
        if (cols.empty()) {
            if (b.cwiseAbs().maxCoeff() > 1e-10) continue;
        } else {
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
            qr.setThreshold(1e-10);
            if (qr.rank() != static_cast<Eigen::Index>(cols.size())) continue;
            x = qr.solve(b);
            if ((sub * x - b).cwiseAbs().maxCoeff() > 1e-9) continue;
            if (x.minCoeff() < -1e-10) continue;
        }
        double value = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) value += c(cols[k]) * x(static_cast<Eigen::Index>(k));
        out.feasible = true;
        out.best = std::max(out.best, value);
    }
    return out;
}

}  // namespace emle::testing
