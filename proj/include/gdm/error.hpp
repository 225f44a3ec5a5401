#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdm {

// One problem found while checking user input. Location fields are empty
// when the problem is not tied to a single cell.
struct Issue {
  std::string code;
  std::string message;
  int round = 0;
  std::string expert;
  std::string alternative;

  bool operator==(const Issue&) const = default;
};

std::string describe(const Issue& issue);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Zero-based position of a grid cell, used to attribute numeric failures.
struct CellRef {
  std::size_t round = 0;
  std::size_t expert = 0;
  std::size_t alternative = 0;
};

// Arithmetic outside an operator's domain (division by an interval touching
// zero, negative exponents on zero subscripts, singular solves).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, std::optional<CellRef> cell = std::nullopt)
      : Error(what), cell_(cell) {}
  const std::optional<CellRef>& cell() const noexcept { return cell_; }

 private:
  std::optional<CellRef> cell_;
};

// Input that violates a documented invariant. Carries every issue found, not
// just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Issue> issues);
  explicit ValidationError(std::string code, const std::string& message);
  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

// Document could not be parsed, or declares a schema version we do not read.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gdm
