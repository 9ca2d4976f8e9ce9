#pragma once

#include <stdexcept>
#include <string>

namespace secondwild {

/// Precondition violated by the caller (bad lag, empty index set, mismatched sizes).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The sample variance (or a bootstrap replicate of it) is not strictly positive.
class DegenerateVarianceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Any numerical failure that is not a caller error.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cholesky failed even at the largest allowed jitter.
class NotPsdError : public NumericalError {
public:
    NotPsdError(const std::string& what, double most_negative_pivot)
        : NumericalError(what), most_negative_pivot_(most_negative_pivot) {}

    [[nodiscard]] double most_negative_pivot() const noexcept { return most_negative_pivot_; }

private:
    double most_negative_pivot_;
};

}  // namespace secondwild
