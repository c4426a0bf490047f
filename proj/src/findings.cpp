#include "qrisk/findings.hpp"

#include <algorithm>

#include "qrisk/errors.hpp"

namespace qrisk {

std::string_view to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warning";
}

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [](const Finding& f) {
    return f.severity == Severity::Error;
  }));
}

std::size_t ValidationReport::warning_count() const {
  return findings.size() - error_count();
}

void ValidationReport::error(std::string path, std::string message) {
  findings.push_back({Severity::Error, std::move(path), std::move(message)});
}

void ValidationReport::warning(std::string path, std::string message) {
  findings.push_back({Severity::Warning, std::move(path), std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other) {
  findings.insert(findings.end(), other.findings.begin(), other.findings.end());
}

void ValidationReport::merge(const ValidationReport& other, std::string_view path_prefix) {
  for (const auto& f : other.findings) {
    std::string path(path_prefix);
    if (!f.path.empty()) {
      if (!path.empty() && f.path.front() != '[') path += '.';
      path += f.path;
    }
    findings.push_back({f.severity, std::move(path), f.message});
  }
}

namespace {

std::string summarize(const std::vector<Finding>& findings) {
  for (const auto& f : findings) {
    if (f.severity == Severity::Error) {
      return f.path.empty() ? f.message : f.path + ": " + f.message;
    }
  }
  return "validation failed";
}

}  // namespace

ValidationError::ValidationError(std::vector<Finding> findings)
    : Error(summarize(findings)), findings_(std::move(findings)) {}

}  // namespace qrisk
