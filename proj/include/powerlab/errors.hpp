#pragma once

#include <stdexcept>
#include <string>

namespace powerlab {

// Bad inputs: out-of-range vertices, malformed files, infeasible model
// parameters, violated preconditions. The CLI maps this to exit code 2.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// Computations that started from valid inputs but failed to produce a
// trustworthy result: solver non-convergence, overflow, exhausted restart
// budgets. The CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace powerlab
