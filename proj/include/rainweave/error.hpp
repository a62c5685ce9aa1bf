#pragma once

#include <stdexcept>
#include <string>

namespace rainweave {

// Failure classes. The CLI maps each one to its own exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class FormatError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class BoundsError : public DimensionError {
public:
  BoundsError(const std::string& what, int row, int col, int size)
      : DimensionError(what), row_(row), col_(col), size_(size) {}

  int row() const { return row_; }
  int col() const { return col_; }
  int size() const { return size_; }

private:
  int row_;
  int col_;
  int size_;
};

class ExtractionError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace rainweave
