#pragma once

#include <stdexcept>
#include <string>

namespace fubm {

/// Input outside the mathematical domain of an operation (t >= 4, z = 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A solve or quadrature that failed on valid input. The message names the
/// regime and parameter where it happened.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fubm
