#pragma once

#include <stdexcept>
#include <string>

namespace kprab {

// Root of everything the core throws. The C API maps each subclass onto a
// status code, so keep the hierarchy flat.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (k <= 0, a
// violated geometric-series bound, a grid that does not start at 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Caller broke an API contract that is not a math-domain issue, e.g.
// mismatched vector lengths.
class ContractError : public Error {
public:
    using Error::Error;
};

// A series did not reach its tolerance within the allowed number of terms.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double partial_sum, double last_term)
        : Error(what), partial_sum_(partial_sum), last_term_(last_term) {}

    double partial_sum() const noexcept { return partial_sum_; }
    double last_term() const noexcept { return last_term_; }

private:
    double partial_sum_;
    double last_term_;
};

// A solution series whose terms grow instead of decaying.
class DivergenceError : public Error {
public:
    using Error::Error;
};

// Numerical Laplace horizon could not be chosen to meet the tail bound.
class HorizonError : public Error {
public:
    using Error::Error;
};

// Non-finite value produced while evaluating a user callable.
class EvaluationError : public Error {
public:
    using Error::Error;
};

}  // namespace kprab
