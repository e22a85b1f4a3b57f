#pragma once

#include <stdexcept>
#include <string>

namespace botrf {

// Base of every error the engine raises on bad input or missing data.
// Messages are written for the end user; they never carry internals.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class UndefinedAzimuthError : public DomainError {
 public:
  UndefinedAzimuthError() : DomainError("azimuth is undefined for coincident points") {}
};

class MalformedTileError : public Error {
 public:
  using Error::Error;
};

class MissingDataError : public Error {
 public:
  explicit MissingDataError(std::string tile)
      : Error("missing elevation data: tile " + tile + ".hgt not found in the DEM directory"),
        tile_(std::move(tile)) {}

  const std::string& tile() const noexcept { return tile_; }

 private:
  std::string tile_;
};

class VoidDataError : public Error {
 public:
  using Error::Error;
};

class PathTooShortError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedFrequencyError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace botrf
