#ifndef HYPERBALL_ERRORS_HPP
#define HYPERBALL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hyperball {

// Series did not converge at the requested point (e.g. 2F1 at x = 1 with c-a-b <= 0).
struct NonConvergent : std::domain_error {
  using std::domain_error::domain_error;
};

// Series hit its term cap before meeting the tolerance.
struct ToleranceNotReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedDimension : std::domain_error {
  using std::domain_error::domain_error;
};

struct DegenerateDenominator : std::domain_error {
  using std::domain_error::domain_error;
};

struct OrderOutOfRange : std::domain_error {
  using std::domain_error::domain_error;
};

struct InsufficientGrid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConstructionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace hyperball

#endif  // HYPERBALL_ERRORS_HPP
