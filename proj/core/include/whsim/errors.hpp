#pragma once

#include <stdexcept>
#include <string>

namespace whsim {

// Base of every error the library throws. The category string feeds the CLI
// exit code mapping.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class StorageFull : public Error {
 public:
  StorageFull(std::string scope, const std::string& what)
      : Error("storage_full", what), scope_(std::move(scope)) {}
  // Zone or class that overflowed, e.g. "P", "class A".
  const std::string& scope() const noexcept { return scope_; }

 private:
  std::string scope_;
};

class StockOut : public Error {
 public:
  StockOut(bool blocked, const std::string& what)
      : Error("stock_out", what), blocked_(blocked) {}
  // True when stock exists but every pallet sits behind an unmovable front.
  bool blocked() const noexcept { return blocked_; }

 private:
  bool blocked_;
};

class Unreachable : public Error {
 public:
  explicit Unreachable(const std::string& what) : Error("unreachable", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

// A KPI was requested over a window with nothing in it.
class EmptyWindow : public Error {
 public:
  explicit EmptyWindow(const std::string& what) : Error("empty_window", what) {}
};

// A scenario failed while running; wraps the underlying error.
class RuntimeError : public Error {
 public:
  explicit RuntimeError(const std::string& what) : Error("runtime", what) {}
};

class LogicError : public Error {
 public:
  explicit LogicError(const std::string& what) : Error("logic", what) {}
};

}  // namespace whsim
