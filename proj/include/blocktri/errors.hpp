#pragma once

#include <stdexcept>

namespace blocktri {

// A documented numerical precondition does not hold for the given input
// (singular coupling block, vector not in the null space, basis that does
// not diagonalize). Distinct from std::invalid_argument, which the library
// reserves for structural misuse (shape mismatches, empty inputs).
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation finished but an internal consistency check failed
// (residual over tolerance, degenerate renormalization block).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace blocktri
