#pragma once

#include <stdexcept>
#include <string>

namespace secharq {

// Raised for malformed experiment configuration (CLI maps it to exit code 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an iterative numeric routine fails to converge (exit code 3).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an exact enumeration would exceed its tuple budget.
struct enumeration_budget_error : std::runtime_error {
    explicit enumeration_budget_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace secharq
