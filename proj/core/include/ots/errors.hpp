#pragma once

#include <stdexcept>
#include <string>

namespace ots {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file could not be read or parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A grid case or switching state violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An energized island carries load but no generation.
class InfeasibleBalance : public Error {
 public:
  using Error::Error;
};

// The reduced susceptance system could not be factorized.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// No switching state satisfies all security constraints.
class InfeasibleProblem : public Error {
 public:
  using Error::Error;
};

// The MILP backend failed, returned garbage, or is unavailable.
class BackendFailure : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ots
