#pragma once

#include <stdexcept>
#include <string>

namespace mfcg {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidRateError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

class DegenerateParametersError : public Error {
 public:
  using Error::Error;
};

class UnsupportedParametersError : public Error {
 public:
  using Error::Error;
};

class IntegrationFailureError : public Error {
 public:
  using Error::Error;
};

// Configuration problems carry the offending key path ("section.key").
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace mfcg
