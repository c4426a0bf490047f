#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrisk/findings.hpp"

namespace qrisk {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is not a well-formed document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input parsed but violates one or more invariants.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Finding> findings);
  ValidationError(std::string message, std::vector<Finding> findings)
      : Error(std::move(message)), findings_(std::move(findings)) {}

  const std::vector<Finding>& findings() const noexcept { return findings_; }

 private:
  std::vector<Finding> findings_;
};

/// A scalar argument lies outside its domain (score not in 1..5, m > 2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A reference (chain id, step index) does not resolve.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace qrisk
