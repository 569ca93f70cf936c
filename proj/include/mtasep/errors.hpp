#pragma once

#include <stdexcept>
#include <string>

namespace mtasep {

struct EmptyLevel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInvertible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WindowTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArgumentsTooClose : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonProbability : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mtasep
