#pragma once

#include <stdexcept>
#include <string>

namespace tdecomp {

/// Raised when a configured size cap (submonoid closure, brute force) is hit.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a runtime certificate of one of the structural bounds fails.
/// These are never user errors: they indicate a broken invariant.
struct TheoryViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct ParseError : std::runtime_error {
    ParseError(std::string msg, int line, int column)
        : std::runtime_error(std::move(msg)), line(line), column(column) {}
    int line;
    int column;
};

}  // namespace tdecomp
