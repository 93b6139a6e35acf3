#pragma once

#include <stdexcept>
#include <string>

namespace subcity {

// Malformed input data or file schema. The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure discovered at runtime (non-convergence, undefined
// statistic). The CLI maps this to exit code 1.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace subcity
