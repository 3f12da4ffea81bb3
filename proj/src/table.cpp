#include "emle/table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "emle/error.hpp"

namespace emle {

ContingencyTable::ContingencyTable(std::vector<FactorSpec> factors, std::vector<Count> counts)
    : factors_(std::move(factors)), counts_(std::move(counts)) {
    std::size_t cells = 1;
    for (const auto& f : factors_) {
        if (f.levels.size() < 2)
            throw DataError("factor '" + f.name + "' needs at least two levels");
        auto sorted = f.levels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw DataError("factor '" + f.name + "' has duplicate level labels");
        cells *= f.levels.size();
    }
    for (std::size_t i = 0; i < factors_.size(); ++i)
        for (std::size_t j = i + 1; j < factors_.size(); ++j)
            if (factors_[i].name == factors_[j].name)
                throw DataError("duplicate factor name '" + factors_[i].name + "'");
    if (counts_.size() != cells)
        throw DataError("count vector has " + std::to_string(counts_.size()) +
                        " entries, expected " + std::to_string(cells));
    for (Count c : counts_) {
        if (c < 0) throw DataError("negative cell count");
        total_ += c;
    }
    strides_.assign(factors_.size(), 1);
    for (std::size_t k = factors_.size(); k-- > 1;)
        strides_[k - 1] = strides_[k] * factors_[k].levels.size();
}

std::size_t ContingencyTable::num_zero_cells() const {
    return static_cast<std::size_t>(std::count(counts_.begin(), counts_.end(), Count{0}));
}

std::size_t ContingencyTable::factor_position(const std::string& name) const {
    for (std::size_t k = 0; k < factors_.size(); ++k)
        if (factors_[k].name == name) return k;
    throw DataError("unknown factor '" + name + "'");
}

bool ContingencyTable::has_factor(const std::string& name) const {
    return std::any_of(factors_.begin(), factors_.end(),
                       [&](const FactorSpec& f) { return f.name == name; });
}

CellIndex ContingencyTable::cell_index(std::size_t cell) const {
    CellIndex idx(factors_.size());
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        idx[k] = cell / strides_[k];
        cell %= strides_[k];
    }
    return idx;
}

std::size_t ContingencyTable::cell_offset(const CellIndex& index) const {
    if (index.size() != factors_.size()) throw DataError("cell index has wrong arity");
    std::size_t off = 0;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        if (index[k] >= factors_[k].levels.size())
            throw DataError("level index out of range for factor '" + factors_[k].name + "'");
        off += index[k] * strides_[k];
    }
    return off;
}

std::string ContingencyTable::cell_label(std::size_t cell) const {
    const auto idx = cell_index(cell);
    bool short_labels = true;
    for (std::size_t k = 0; k < factors_.size(); ++k)
        short_labels = short_labels && factors_[k].levels[idx[k]].size() == 1;
    std::string out;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        if (!short_labels && k > 0) out += ',';
        out += factors_[k].levels[idx[k]];
    }
    return out;
}

std::vector<Count> ContingencyTable::marginal(const std::vector<std::string>& subset) const {
    std::vector<bool> keep(factors_.size(), false);
    for (const auto& name : subset) keep[factor_position(name)] = true;

    std::vector<std::size_t> sub_strides(factors_.size(), 0);
    std::size_t sub_cells = 1;
    for (std::size_t k = factors_.size(); k-- > 0;) {
        if (!keep[k]) continue;
        sub_strides[k] = sub_cells;
        sub_cells *= factors_[k].levels.size();
    }
    std::vector<Count> out(sub_cells, 0);
    for (std::size_t cell = 0; cell < counts_.size(); ++cell) {
        const auto idx = cell_index(cell);
        std::size_t off = 0;
        for (std::size_t k = 0; k < factors_.size(); ++k) off += idx[k] * sub_strides[k];
        out[off] += counts_[cell];
    }
    return out;
}

ContingencyTable ContingencyTable::binarize() const {
    std::vector<Count> bin(counts_.size());
    std::transform(counts_.begin(), counts_.end(), bin.begin(),
                   [](Count c) { return c > 0 ? Count{1} : Count{0}; });
    return with_counts(std::move(bin));
}

ContingencyTable ContingencyTable::with_counts(std::vector<Count> counts) const {
    return ContingencyTable(factors_, std::move(counts));
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_fields(const std::string& line, bool comma) {
    std::vector<std::string> out;
    if (comma) {
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) out.push_back(unquote(trim(field)));
        if (!line.empty() && line.back() == ',') out.emplace_back();
    } else {
        std::istringstream ss(line);
        std::string field;
        while (ss >> field) out.push_back(unquote(field));
    }
    return out;
}

std::optional<double> as_number(const std::string& s) {
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return v;
}

Count parse_count(const std::string& s, std::size_t line_no) {
    Count v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size()) {
        if (v < 0)
            throw ParseError("line " + std::to_string(line_no) + ": negative frequency '" + s + "'");
        return v;
    }
    // Accept integral values written as reals, e.g. "3.0".
    if (auto d = as_number(s); d && *d == static_cast<double>(static_cast<Count>(*d))) {
        if (*d < 0)
            throw ParseError("line " + std::to_string(line_no) + ": negative frequency '" + s + "'");
        return static_cast<Count>(*d);
    }
    throw ParseError("line " + std::to_string(line_no) + ": frequency '" + s +
                     "' is not a nonnegative integer");
}

}  // namespace

ContingencyTable parse_table(std::istream& in, const std::string& freq_column) {
    std::string line;
    std::size_t line_no = 0;
    std::string header_line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty() && trim(line)[0] != '#') {
            header_line = line;
            break;
        }
    }
    if (header_line.empty()) throw ParseError("empty table input");

    const bool comma = header_line.find(',') != std::string::npos;
    const auto header = split_fields(header_line, comma);

    auto freq_it = std::find(header.begin(), header.end(), freq_column);
    if (freq_it == header.end())
        throw ParseError("frequency column '" + freq_column + "' not found in header");
    const std::size_t freq_pos = static_cast<std::size_t>(freq_it - header.begin());

    std::vector<std::size_t> factor_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == freq_pos) continue;
        if (header[c].empty()) throw ParseError("empty column name in header");
        factor_cols.push_back(c);
    }

    struct Row {
        std::vector<std::string> labels;
        Count count;
        std::size_t line_no;
    };
    std::vector<Row> rows;
    std::vector<std::vector<std::string>> seen(factor_cols.size());
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split_fields(line, comma);
        if (fields.size() != header.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, found " +
                             std::to_string(fields.size()));
        Row r{{}, parse_count(fields[freq_pos], line_no), line_no};
        for (std::size_t k = 0; k < factor_cols.size(); ++k) {
            const auto& label = fields[factor_cols[k]];
            if (label.empty())
                throw ParseError("line " + std::to_string(line_no) + ": empty level label");
            if (std::find(seen[k].begin(), seen[k].end(), label) == seen[k].end())
                seen[k].push_back(label);
            r.labels.push_back(label);
        }
        rows.push_back(std::move(r));
    }

    std::vector<FactorSpec> factors;
    for (std::size_t k = 0; k < factor_cols.size(); ++k) {
        auto levels = seen[k];
        const bool numeric = std::all_of(levels.begin(), levels.end(),
                                         [](const std::string& s) { return as_number(s).has_value(); });
        if (numeric)
            std::stable_sort(levels.begin(), levels.end(), [](const std::string& x, const std::string& y) {
                return *as_number(x) < *as_number(y);
            });
        factors.push_back({header[factor_cols[k]], std::move(levels)});
    }

    std::size_t cells = 1;
    for (const auto& f : factors) cells *= f.levels.size();
    std::vector<Count> counts(cells, 0);
    std::vector<bool> filled(cells, false);

    std::vector<std::map<std::string, std::size_t>> level_pos(factors.size());
    for (std::size_t k = 0; k < factors.size(); ++k)
        for (std::size_t l = 0; l < factors[k].levels.size(); ++l) level_pos[k][factors[k].levels[l]] = l;

    for (const auto& r : rows) {
        std::size_t off = 0;
        for (std::size_t k = 0; k < factors.size(); ++k)
            off = off * factors[k].levels.size() + level_pos[k].at(r.labels[k]);
        if (filled[off])
            throw ParseError("line " + std::to_string(r.line_no) + ": duplicate cell");
        filled[off] = true;
        counts[off] = r.count;
    }
    return ContingencyTable(std::move(factors), std::move(counts));
}

ContingencyTable read_table_file(const std::string& path, const std::string& freq_column) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open data file '" + path + "'");
    return parse_table(in, freq_column);
}

void write_table(std::ostream& out, const ContingencyTable& table, const std::string& freq_column) {
    for (const auto& f : table.factors()) out << f.name << ',';
    out << freq_column << '\n';
    for (std::size_t cell = 0; cell < table.num_cells(); ++cell) {
        const auto idx = table.cell_index(cell);
        for (std::size_t k = 0; k < idx.size(); ++k) out << table.factors()[k].levels[idx[k]] << ',';
        out << table.count(cell) << '\n';
    }
}

}  // namespace emle
