#ifndef SUBFRACTAL_ERRORS_HPP
#define SUBFRACTAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace subfractal {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or contract-violating input (bad letters, unequal word
/// lengths, schema violations, out-of-range parameters).
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

/// The presentation admits no infinite sequences (or the requested
/// quantity is -infinity because the language is empty).
class EmptyLanguageError : public Error {
public:
    explicit EmptyLanguageError(const std::string& msg) : Error(msg) {}
};

/// A computation exceeded a configured cap (word enumeration, matrix size).
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& msg) : Error(msg) {}
};

/// Numerical failure (non-convergence, lost bracket). Carries the best
/// estimate available when the failure was detected.
class NumericError : public Error {
public:
    NumericError(const std::string& msg, double best_estimate)
        : Error(msg), best_estimate_(best_estimate) {}
    double best_estimate() const { return best_estimate_; }

private:
    double best_estimate_;
};

/// The requested diagnostic does not apply to the given input
/// (e.g. irreducibility-only diagnostics on a reducible presentation).
class NotApplicableError : public Error {
public:
    explicit NotApplicableError(const std::string& msg) : Error(msg) {}
};

} // namespace subfractal

#endif
