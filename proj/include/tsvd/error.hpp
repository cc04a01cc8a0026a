#pragma once

#include <stdexcept>
#include <string>

namespace tsvd {

/// Raised when a caller breaks a documented precondition (shape, rank, range).
class ContractViolation : public std::invalid_argument {
public:
    explicit ContractViolation(const std::string& what)
        : std::invalid_argument(what) {}
};

/// Raised when a numerical routine fails to produce a usable result.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what)
        : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ContractViolation(msg);
}

}  // namespace detail
}  // namespace tsvd
