#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace episodes {

/// File could not be opened, read or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input data. `line` is 1-based, 0 when not tied to a line.
struct FormatError : std::runtime_error {
  FormatError(const std::string& what, std::size_t line_no = 0)
      : std::runtime_error(line_no ? "line " + std::to_string(line_no) + ": " + what : what),
        line(line_no) {}
  std::size_t line;
};

/// Invalid simulator or mining configuration.
struct ConfigError : FormatError {
  using FormatError::FormatError;
};

}  // namespace episodes
