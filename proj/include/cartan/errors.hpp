#pragma once

#include <stdexcept>

namespace cartan {

// A rule, name or declaration the computation needs is missing or malformed.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The model data violates a mathematical assumption (dependent frame, wrong Levi rank, ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A reduction step failed its validation.
class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cartan
