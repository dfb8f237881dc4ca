#ifndef BESSELRULES_ERRORS_HPP_
#define BESSELRULES_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace besselrules {

// Bad argument or precondition violation.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument hits a pole (log-Gamma at a non-positive integer).
struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

// A series did not converge within its term budget.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An independent test oracle could not certify its own accuracy.
struct OracleFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed form evaluated outside its floating-point safe range.
struct RangeError : std::range_error {
  using std::range_error::range_error;
};

// Sampled spectrum has an aliasing/truncation tail above tolerance.
struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Physical parameters outside the regime a formula requires.
struct InvalidRegime : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace besselrules

#endif  // BESSELRULES_ERRORS_HPP_
