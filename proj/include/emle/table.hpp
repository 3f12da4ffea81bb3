#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace emle {

using Count = std::int64_t;

struct FactorSpec {
    std::string name;
    std::vector<std::string> levels;  // levels[0] is the baseline

    std::size_t size() const { return levels.size(); }
};

// One level index per factor, in factor order.
using CellIndex = std::vector<std::size_t>;

// A complete cross-classification. Cells are stored lexicographically in
// factor order with the last factor varying fastest; every downstream row
// index refers to this layout.
class ContingencyTable {
public:
    ContingencyTable(std::vector<FactorSpec> factors, std::vector<Count> counts);

    const std::vector<FactorSpec>& factors() const { return factors_; }
    std::span<const Count> counts() const { return counts_; }
    Count count(std::size_t cell) const { return counts_[cell]; }
    Count total() const { return total_; }

    std::size_t num_factors() const { return factors_.size(); }
    std::size_t num_cells() const { return counts_.size(); }
    std::size_t num_zero_cells() const;

    // Position of a factor by name; throws DataError when absent.
    std::size_t factor_position(const std::string& name) const;
    bool has_factor(const std::string& name) const;

    CellIndex cell_index(std::size_t cell) const;
    std::size_t cell_offset(const CellIndex& index) const;
    // Level labels joined without separator, e.g. "131"; falls back to
    // comma-joined labels when any label is longer than one character.
    std::string cell_label(std::size_t cell) const;

    // Counts over the sub-table of `subset` (factors kept in table order,
    // last varying fastest). The empty subset yields {N}.
    std::vector<Count> marginal(const std::vector<std::string>& subset) const;

    // 1 where the count is positive, 0 elsewhere.
    ContingencyTable binarize() const;

    // Same factors, different counts.
    ContingencyTable with_counts(std::vector<Count> counts) const;

private:
    std::vector<FactorSpec> factors_;
    std::vector<Count> counts_;
    std::vector<std::size_t> strides_;
    Count total_ = 0;
};

// Reads a delimited table with a header row. Columns other than
// `freq_column` are factors. The delimiter is a comma when the header
// contains one, otherwise runs of whitespace. Unlisted cells get count 0.
// Level order is first appearance unless every label of the factor parses
// as a number, in which case it is ascending numeric.
ContingencyTable parse_table(std::istream& in, const std::string& freq_column = "freq");
ContingencyTable read_table_file(const std::string& path, const std::string& freq_column = "freq");

// Writes every cell (including zeros) as comma-separated rows in table order.
void write_table(std::ostream& out, const ContingencyTable& table,
                 const std::string& freq_column = "freq");

}  // namespace emle
