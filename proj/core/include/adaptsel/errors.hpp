#pragma once

#include <stdexcept>
#include <string>

namespace adaptsel {

// Bad or inconsistent configuration (CLI maps this to exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or unreadable input data (CLI maps this to exit code 3).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace adaptsel
