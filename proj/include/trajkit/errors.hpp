#pragma once

#include <stdexcept>
#include <string>

namespace trajkit {

// Text input (CSV row, config document) that cannot be parsed. The message
// names the offending line where one is known.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parsed input that violates a structural invariant (non-consecutive
// timestamps, too-short trajectory, ...).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A dataset spec that yields no usable training or validation windows.
class empty_dataset_error : public std::runtime_error {
 public:
  explicit empty_dataset_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite losses or gradients during training.
class divergence_error : public std::runtime_error {
 public:
  explicit divergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace trajkit
