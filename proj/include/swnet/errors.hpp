#pragma once

#include <stdexcept>
#include <string>

namespace swnet {

// A theorem or operation was invoked on inputs violating its sub/supermodularity
// (or similar) hypothesis. Distinct from a "false" verdict.
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested rates or demands cannot be supported by the network.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swnet
