#pragma once

#include <stdexcept>
#include <string>

namespace cellcert {

// Input is syntactically valid but hits a measure-zero / degenerate configuration
// (e.g. a query point exactly on a tessellation boundary).
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A formula left the range where it can be evaluated in double precision.
class OverflowDomain : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Caller-supplied data contradicts itself (e.g. an anchor point violating the
// very sign constraints it is supposed to satisfy).
class InconsistentInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Serialized payload failed validation while decoding.
class CorruptInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cellcert
