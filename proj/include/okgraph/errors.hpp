#pragma once

#include <stdexcept>
#include <string>

namespace okgraph {

/// Bad input: malformed graph, spec syntax, dimension mismatch, violated precondition.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A construction produced data that failed its own round-trip check.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace okgraph
