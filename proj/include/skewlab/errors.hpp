#pragma once

#include <stdexcept>
#include <string>

namespace skewlab {

// Caller broke a precondition (bad dimensions, wrong time type, bad config).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptySetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The budget ran out before the evidence separated the hypotheses.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skewlab
