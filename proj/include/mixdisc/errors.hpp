#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixdisc {

/// Broad failure classes; the CLI maps them onto exit codes 1, 2 and 3.
enum class ErrorCategory {
  Input,      // malformed or precondition-violating input
  Numerical,  // iteration caps, cost gates, singular problems
  Invariant,  // a mathematical invariant failed to hold
};

/// Shortest round-trippable-ish text for a double in messages ("%.6g").
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define MIXDISC_DEFINE_ERROR(Name, Category)                  \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& what)                    \
        : Error(ErrorCategory::Category, #Name ": " + what) {} \
  };

MIXDISC_DEFINE_ERROR(DimensionMismatch, Input)
MIXDISC_DEFINE_ERROR(NotHermitian, Input)
MIXDISC_DEFINE_ERROR(NotPositiveDefinite, Input)
MIXDISC_DEFINE_ERROR(NotDoublyStochastic, Input)
MIXDISC_DEFINE_ERROR(NotIndecomposable, Input)
MIXDISC_DEFINE_ERROR(NotUnitary, Input)
MIXDISC_DEFINE_ERROR(PreconditionViolated, Input)
MIXDISC_DEFINE_ERROR(InvalidWeight, Input)
MIXDISC_DEFINE_ERROR(TermNotPsd, Input)
MIXDISC_DEFINE_ERROR(ParseError, Input)
MIXDISC_DEFINE_ERROR(DimensionTooLarge, Numerical)
MIXDISC_DEFINE_ERROR(SingularPencil, Numerical)
MIXDISC_DEFINE_ERROR(SamplerExhausted, Numerical)
MIXDISC_DEFINE_ERROR(DecompositionInconsistent, Invariant)
MIXDISC_DEFINE_ERROR(InvariantBreach, Invariant)

#undef MIXDISC_DEFINE_ERROR

/// Raised when an iterative method hits its cap. Carries the best iterate's
/// defect measure so callers can report how far off it stopped.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, long iterations, double defect,
                 std::vector<double> best_iterate = {})
      : Error(ErrorCategory::Numerical, "NonConvergence: " + what),
        iterations_(iterations),
        defect_(defect),
        best_iterate_(std::move(best_iterate)) {}

  long iterations() const noexcept { return iterations_; }
  double defect() const noexcept { return defect_; }
  const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }

 private:
  long iterations_;
  double defect_;
  std::vector<double> best_iterate_;
};

}  // namespace mixdisc
