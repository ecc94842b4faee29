#pragma once

#include <stdexcept>
#include <string>

namespace qbgk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Macroscopic state outside the Fermi admissible region.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class BlowUpError : public Error {
 public:
  using Error::Error;
};

class BoundarySolveError : public Error {
 public:
  using Error::Error;
};

class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Call inside a catch block: rethrows the active qbgk error as the same type with `where`
// appended to the message. Other exceptions pass through unchanged.
[[noreturn]] void rethrow_located(const std::string& where);

// Process exit codes used by the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitFeasibility = 3,
  kExitConvergence = 4,
  kExitBlowUp = 5,
};

}  // namespace qbgk
