#ifndef TEMPORA_ERRORS_HPP
#define TEMPORA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tempora {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad arguments or violated preconditions (dimension mismatch, non-causal
/// vector where a causal one is required, ...).
class InputError : public Error {
public:
  using Error::Error;
};

/// Configuration document problems. Carries the offending field path.
class ConfigError : public Error {
public:
  ConfigError(std::string field_path, const std::string& what)
      : Error(field_path.empty() ? what : field_path + ": " + what),
        field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

private:
  std::string field_path_;
};

/// Requested value lies outside the chart or a field's range.
class RangeError : public Error {
public:
  using Error::Error;
};

/// A model could not be constructed (non-Lorentzian metric at a node, ...).
class ConstructionError : public Error {
public:
  using Error::Error;
};

/// A synthesis post-check failed after constant escalation was exhausted.
/// `detail` names the failing property and node.
class SynthesisError : public Error {
public:
  SynthesisError(const std::string& what, std::string detail = {})
      : Error(what), detail_(std::move(detail)) {}
  const std::string& detail() const { return detail_; }

private:
  std::string detail_;
};

} // namespace tempora

#endif
