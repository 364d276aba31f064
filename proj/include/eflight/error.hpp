#pragma once

#include <stdexcept>
#include <string>

namespace eflight {

// Input/schema problems: bad files, invalid rows, out-of-range arguments.
// The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Broken internal invariants (exit code 3).
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace eflight
