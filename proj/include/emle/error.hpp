#pragma once

#include <stdexcept>
#include <string>

namespace emle {

// Malformed input text: tables, formulas, generator strings.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Well-formed input that violates a precondition (unknown factor, empty table, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Solver breakdown, rank inconsistency, non-convergence.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Missing or unreadable files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace emle
