#pragma once

#include <stdexcept>
#include <string>

namespace torusconj {

// Malformed textual input (unknown generator, bad syntax, inconsistent file).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input is well-formed but outside the domain of the operation.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured search or state budget was exhausted.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace torusconj
