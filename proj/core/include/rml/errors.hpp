#pragma once

#include <stdexcept>
#include <string>

namespace rml {

/// Invalid mathematical input (dimension out of range, divergent tail, ...).
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Caller misuse (empty output grid, exponent outside the admissible interval, ...).
class usage_error : public std::invalid_argument {
public:
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed to reach its target (quadrature convergence,
/// tail fit, cross-method consistency).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// A structural property that is supposed to hold by construction was violated.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace rml
