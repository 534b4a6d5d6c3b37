#pragma once

#include <stdexcept>
#include <string>

namespace tokenlab {

/// Invalid or incomplete configuration. The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that violates a documented schema or precondition.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tokenlab
