#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace tbent {

/// Invalid model, ensemble or run parameters. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Eigensolver failed to converge for one eigenvalue. Maps to exit code 3.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

  /// Disorder realization being solved, when known.
  std::optional<std::uint64_t> realization;

 private:
  std::size_t index_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tbent
