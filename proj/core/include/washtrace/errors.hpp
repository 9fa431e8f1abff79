#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace washtrace {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent input data. The CLI maps these to exit code 1.
struct InputError : Error {
  using Error::Error;
};

// A broken internal consistency check. The CLI maps these to exit code 2.
struct InvariantViolation : Error {
  using Error::Error;
};

class SchemaError : public InputError {
 public:
  SchemaError(std::string source, std::size_t line, const std::string& what)
      : InputError(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

struct DuplicatePriceEntry : InputError {
  using InputError::InputError;
};

class MissingPrice : public InputError {
 public:
  MissingPrice(std::string asset, std::string date)
      : InputError("no USD price for " + asset + " on " + date),
        asset_(std::move(asset)),
        date_(std::move(date)) {}

  const std::string& asset() const noexcept { return asset_; }
  const std::string& date() const noexcept { return date_; }

 private:
  std::string asset_;
  std::string date_;
};

struct ClientUnavailable : InputError {
  using InputError::InputError;
};

struct MixedNft : InputError {
  using InputError::InputError;
};

struct ZeroMarketVolume : InputError {
  using InputError::InputError;
};

}  // namespace washtrace
