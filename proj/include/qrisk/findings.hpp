#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qrisk {

enum class Severity { Error, Warning };

std::string_view to_string(Severity severity);

struct Finding {
  Severity severity = Severity::Error;
  std::string path;
  std::string message;

  bool operator==(const Finding&) const = default;
};

/// Findings produced by a validation pass. A report is valid iff it holds no
/// error-severity findings; warnings never invalidate.
struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const { return error_count() == 0; }
  std::size_t error_count() const;
  std::size_t warning_count() const;

  void error(std::string path, std::string message);
  void warning(std::string path, std::string message);
  void merge(const ValidationReport& other);
  void merge(const ValidationReport& other, std::string_view path_prefix);
};

}  // namespace qrisk
