#include "gdm/error.hpp"

namespace gdm {

std::string describe(const Issue& issue) {
  std::string out = issue.code + ": " + issue.message;
  if (issue.round > 0 || !issue.expert.empty() || !issue.alternative.empty()) {
    out += " (";
    bool first = true;
    auto field = [&](const std::string& key, const std::string& value) {
      if (value.empty()) return;
      if (!first) out += ", ";
      out += key + " " + value;
      first = false;
    };
    field("round", issue.round > 0 ? std::to_string(issue.round) : "");
    field("expert", issue.expert);
    field("alternative", issue.alternative);
    out += ")";
  }
  return out;
}

namespace {

std::string summarize(const std::vector<Issue>& issues) {
  if (issues.empty()) return "validation failed";
  std::string out = describe(issues.front());
  if (issues.size() > 1) out += " (+" + std::to_string(issues.size() - 1) + " more)";
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Issue> issues)
    : Error(summarize(issues)), issues_(std::move(issues)) {}

ValidationError::ValidationError(std::string code, const std::string& message)
    : ValidationError(std::vector<Issue>{Issue{std::move(code), message}}) {}

}  // namespace gdm
