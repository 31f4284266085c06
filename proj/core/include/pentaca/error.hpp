#pragma once

#include <stdexcept>
#include <string>

namespace pentaca {

// Every failure raised by the library carries a short machine-readable kind
// ("parse", "navigation", "no-rule", ...) next to the human detail, so the
// CLI can print `error: <kind>: <detail>`.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(detail), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& detail) : Error("parse", detail) {}
  ParseError(int line, const std::string& detail)
      : Error("parse", "line " + std::to_string(line) + ": " + detail), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_ = 0;
};

class NavigationError : public Error {
 public:
  explicit NavigationError(const std::string& detail) : Error("navigation", detail) {}
};

class MapTooShallow : public Error {
 public:
  explicit MapTooShallow(const std::string& detail) : Error("map-too-shallow", detail) {}
};

class NoRuleError : public Error {
 public:
  explicit NoRuleError(const std::string& detail) : Error("no-rule", detail) {}
};

class InferenceError : public Error {
 public:
  explicit InferenceError(const std::string& detail) : Error("inference", detail) {}
};

class RenderError : public Error {
 public:
  explicit RenderError(const std::string& detail) : Error("render", detail) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& detail) : Error("usage", detail) {}
};

}  // namespace pentaca
