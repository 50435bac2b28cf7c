#pragma once

#include <stdexcept>
#include <string>

namespace ldp {

// Configuration / input / I-O problems. CLI exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// No parameter choice satisfies the certified inequalities. CLI exit code 2.
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// A verification suite ran and failed. CLI exit code 3.
struct ValidationFailure : std::runtime_error {
  explicit ValidationFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ldp
