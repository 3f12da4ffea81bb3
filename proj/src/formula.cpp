#include "emle/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "emle/error.hpp"

namespace emle {

Term::Term(std::vector<std::string> factors) : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end());
    if (std::adjacent_find(factors_.begin(), factors_.end()) != factors_.end())
        throw ParseError("factor repeated within a term");
}

bool Term::contains(const std::string& factor) const {
    return std::binary_search(factors_.begin(), factors_.end(), factor);
}

bool Term::is_subset_of(const Term& other) const {
    return std::includes(other.factors_.begin(), other.factors_.end(), factors_.begin(), factors_.end());
}

std::string Term::label() const {
    if (factors_.empty()) return "(Intercept)";
    std::string out;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        if (k > 0) out += ':';
        out += factors_[k];
    }
    return out;
}

bool operator<(const Term& x, const Term& y) {
    if (x.factors_.size() != y.factors_.size()) return x.factors_.size() < y.factors_.size();
    return x.factors_ < y.factors_;
}

std::vector<Term> hierarchical_closure(const std::vector<Term>& seeds) {
    std::set<Term> out{Term{}};
    for (const auto& seed : seeds) {
        const auto& f = seed.factors();
        if (f.size() >= 8 * sizeof(unsigned long))
            throw ParseError("term '" + seed.label() + "' has too many factors");
        const unsigned long n = 1UL << f.size();
        for (unsigned long mask = 1; mask < n; ++mask) {
            std::vector<std::string> sub;
            for (std::size_t k = 0; k < f.size(); ++k)
                if (mask & (1UL << k)) sub.push_back(f[k]);
            out.insert(Term(std::move(sub)));
        }
    }
    return {out.begin(), out.end()};
}

std::vector<Term> maximal_terms(const std::vector<Term>& terms) {
    std::vector<Term> out;
    for (const auto& t : terms) {
        const bool dominated = std::any_of(terms.begin(), terms.end(), [&](const Term& u) {
            return u.order() > t.order() && t.is_subset_of(u);
        });
        if (!dominated && !t.is_intercept()) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ModelFormula::ModelFormula(std::string response, const std::vector<Term>& seeds, std::string source)
    : response_(std::move(response)),
      terms_(hierarchical_closure(seeds)),
      generators_(maximal_terms(terms_)),
      source_(std::move(source)) {}

std::vector<std::string> ModelFormula::factor_names() const {
    std::set<std::string> names;
    for (const auto& t : terms_) names.insert(t.factors().begin(), t.factors().end());
    return {names.begin(), names.end()};
}

bool ModelFormula::has_term(const Term& t) const {
    return std::binary_search(terms_.begin(), terms_.end(), t);
}

std::string ModelFormula::generator_string() const {
    if (generators_.empty()) return "[]";
    std::string out;
    for (const auto& g : generators_) {
        const bool short_names = std::all_of(g.factors().begin(), g.factors().end(),
                                             [](const std::string& s) { return s.size() == 1; });
        out += '[';
        for (std::size_t k = 0; k < g.factors().size(); ++k) {
            if (!short_names && k > 0) out += ':';
            out += g.factors()[k];
        }
        out += ']';
    }
    return out;
}

std::string ModelFormula::formula_string() const {
    std::string out = response_ + " ~ ";
    if (generators_.empty()) return out + "1";
    for (std::size_t g = 0; g < generators_.size(); ++g) {
        if (g > 0) out += " + ";
        const auto& f = generators_[g].factors();
        for (std::size_t k = 0; k < f.size(); ++k) {
            if (k > 0) out += '*';
            out += f[k];
        }
    }
    return out;
}

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

class FormulaLexer {
public:
    explicit FormulaLexer(const std::string& text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    std::string name() {
        skip_space();
        if (pos_ >= text_.size() || !is_name_start(text_[pos_])) fail("expected a factor name");
        const auto start = pos_;
        while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
        return text_.substr(start, pos_ - start);
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("formula '" + text_ + "': " + what + " at position " + std::to_string(pos_));
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

ModelFormula parse_formula(const std::string& text) {
    FormulaLexer lex(text);
    const auto response = lex.name();
    if (!lex.accept('~')) lex.fail("expected '~'");
    if (lex.at_end()) lex.fail("empty right-hand side");

    std::vector<Term> seeds;
    do {
        if (lex.accept('1')) {
            // Intercept; nothing beyond the implicit empty term.
            continue;
        }
        std::vector<std::string> names{lex.name()};
        char op = '\0';
        while (lex.peek() == '*' || lex.peek() == ':') {
            const char next = lex.peek();
            if (op != '\0' && next != op) lex.fail("mixing '*' and ':' within one term");
            op = next;
            lex.accept(next);
            names.push_back(lex.name());
        }
        // a*b and a:b close to the same hierarchical set; the distinction only
        // matters for non-hierarchical models, which are not supported.
        seeds.emplace_back(std::move(names));
    } while (lex.accept('+'));
    if (!lex.at_end()) lex.fail("unexpected character '" + std::string(1, lex.peek()) + "'");
    return ModelFormula(response, seeds, text);
}

ModelFormula parse_generators(const std::string& text, const std::string& response) {
    std::vector<Term> seeds;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto group = [&](std::size_t begin, std::size_t end) {
        std::vector<std::string> names;
        for (std::size_t i = begin; i < end; ++i) {
            const char c = text[i];
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            if (!std::isalnum(static_cast<unsigned char>(c)))
                throw ParseError("generators '" + text + "': invalid character '" + std::string(1, c) + "'");
            names.emplace_back(1, c);
        }
        if (names.empty()) throw ParseError("generators '" + text + "': empty group");
        seeds.emplace_back(std::move(names));
    };

    skip();
    if (pos >= text.size()) throw ParseError("empty generator string");
    if (text[pos] == '[') {
        while (true) {
            skip();
            if (pos >= text.size()) break;
            if (text[pos] != '[') throw ParseError("generators '" + text + "': expected '['");
            const auto close = text.find_first_of("[]", pos + 1);
            if (close == std::string::npos || text[close] != ']')
                throw ParseError("generators '" + text + "': unbalanced brackets");
            group(pos + 1, close);
            pos = close + 1;
        }
    } else if (text[pos] == '|') {
        const auto last = text.find_last_not_of(" \t\r\n");
        std::size_t start = pos + 1;
        const std::size_t stop = text[last] == '|' ? last : last + 1;
        while (start <= stop) {
            auto bar = text.find('|', start);
            if (bar == std::string::npos || bar > stop) bar = stop;
            if (text.find_first_of("[]", start) < bar)
                throw ParseError("generators '" + text + "': mixed delimiters");
            group(start, bar);
            start = bar + 1;
        }
    } else {
        throw ParseError("generators '" + text + "': expected '[' or '|'");
    }
    return ModelFormula(response, seeds, text);
}

ModelFormula parse_model(const std::string& text, const std::string& response) {
    if (text.find('~') != std::string::npos) return parse_formula(text);
    return parse_generators(text, response);
}

}  // namespace emle
