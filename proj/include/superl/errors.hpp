#pragma once

#include <stdexcept>
#include <string>

namespace superl {

/// Bad user-facing configuration (files, CLI, config keys). CLI maps this to exit 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A computation that was set up correctly but failed to produce a usable
/// result (solver breakdown, singular system). CLI maps this to exit 1.
class ComputeError : public std::runtime_error {
  public:
    explicit ComputeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace superl
