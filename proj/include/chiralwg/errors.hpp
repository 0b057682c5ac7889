#pragma once

#include <stdexcept>
#include <string>

namespace chiralwg {

// A physical or configuration parameter outside its admissible range. `field`
// is a dotted path such as "emitter.beta" so diagnostics can point at the
// offending JSON key.
class InvalidParameter : public std::invalid_argument {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Inputs that are individually valid but jointly inconsistent.
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed spectrum file. `row` is 1-based and counts the header line.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t row, const std::string& what)
      : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chiralwg
