#pragma once

#include <stdexcept>
#include <string>

namespace qfold {

// Invalid input: malformed datum files, domain mismatches, bad config.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical assertion failed (a theorem-level check did not hold).
struct verify_error : std::runtime_error {
    explicit verify_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal inconsistency: signals a bug, not a math failure.
struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qfold
