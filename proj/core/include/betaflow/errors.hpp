#pragma once

#include <stdexcept>
#include <string>

namespace betaflow {

/// Thrown when an iterative scheme exhausts its step budget before reaching
/// its stopping tolerance (series tails, backward compositions, matrix
/// products). Maps to CLI exit code 3.
class no_convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace betaflow
