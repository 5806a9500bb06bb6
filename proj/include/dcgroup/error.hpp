#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace dcg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands come from different groups, or a payload is not a canonical form.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Random-walk step without mass on the identity.
class AperiodicityError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A configured cap was exceeded. `last_completed()` is the largest radius,
/// power or index that was fully computed before giving up.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what,
                         std::optional<std::uint64_t> last_completed = std::nullopt)
      : Error(what), last_completed_(last_completed) {}

  std::optional<std::uint64_t> last_completed() const { return last_completed_; }

 private:
  std::optional<std::uint64_t> last_completed_;
};

/// A machine-checked statement failed; `witness()` carries the counterexample.
class VerificationError : public Error {
 public:
  VerificationError(const std::string& what, nlohmann::json witness)
      : Error(what), witness_(std::move(witness)) {}

  const nlohmann::json& witness() const { return witness_; }

 private:
  nlohmann::json witness_;
};

}  // namespace dcg
