#pragma once

#include <string>
#include <vector>

namespace emle {

// An interaction term: a sorted set of distinct factor names. The empty term
// is the intercept.
class Term {
public:
    Term() = default;
    explicit Term(std::vector<std::string> factors);

    const std::vector<std::string>& factors() const { return factors_; }
    std::size_t order() const { return factors_.size(); }
    bool is_intercept() const { return factors_.empty(); }
    bool contains(const std::string& factor) const;
    bool is_subset_of(const Term& other) const;

    // "a:b:c", or "(Intercept)" for the empty term.
    std::string label() const;

    // Canonical order: by size, then lexicographic.
    friend bool operator<(const Term& x, const Term& y);
    friend bool operator==(const Term& x, const Term& y) = default;

private:
    std::vector<std::string> factors_;
};

// A hierarchical model: the term set is closed under taking subsets and
// always contains the intercept.
class ModelFormula {
public:
    ModelFormula(std::string response, const std::vector<Term>& seeds, std::string source = {});

    const std::string& response() const { return response_; }
    // Canonically ordered, intercept first.
    const std::vector<Term>& terms() const { return terms_; }
    // Inclusion-maximal terms, canonically ordered.
    const std::vector<Term>& generators() const { return generators_; }
    // Text the model was parsed from (empty when built programmatically).
    const std::string& source() const { return source_; }

    std::vector<std::string> factor_names() const;
    bool has_term(const Term& t) const;

    // "[ab][ac][bc]" style; "[]" for the intercept-only model. Factor names
    // longer than one character are separated by ':' inside the brackets.
    std::string generator_string() const;
    // "freq ~ a*b + a*c + b*c" style, one crossed group per generator.
    std::string formula_string() const;

private:
    std::string response_;
    std::vector<Term> terms_;
    std::vector<Term> generators_;
    std::string source_;
};

// Every subset of every seed term, deduplicated and canonically ordered.
std::vector<Term> hierarchical_closure(const std::vector<Term>& seeds);
std::vector<Term> maximal_terms(const std::vector<Term>& terms);

// `<response> ~ <term> (+ <term>)*`; a term is factor names joined by '*'
// (crossing) or ':' (interaction), or the literal 1 for the intercept.
ModelFormula parse_formula(const std::string& text);

// "[ab][bc][ac]" or "|ad|ae|bdh|": each group is a generator whose factors
// are the single characters of the group.
ModelFormula parse_generators(const std::string& text, const std::string& response = "freq");

// Dispatches on the presence of '~'.
ModelFormula parse_model(const std::string& text, const std::string& response = "freq");

}  // namespace emle
