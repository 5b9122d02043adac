#pragma once

#include <stdexcept>
#include <string>

namespace smartpack {

/// A precondition on an operation's arguments was violated.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A scenario or parameter document failed validation. Carries the dotted
/// path of the offending field, e.g. `device.thermal.time_constant_s`.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message), field_path_(std::move(field_path)) {}

  const std::string& field_path() const noexcept { return field_path_; }

private:
  std::string field_path_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class Unsupported : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

namespace detail {
void require_finite(double value, const char* what);
}  // namespace detail

}  // namespace smartpack
