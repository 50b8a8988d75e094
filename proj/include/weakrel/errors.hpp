#pragma once

#include <stdexcept>
#include <string>

namespace weakrel {

// Contract violations: universe mismatch, empty universe, malformed input.
class domain_error : public std::invalid_argument {
public:
  explicit domain_error(const std::string &what) : std::invalid_argument(what) {}
};

// A fixpoint iteration ran out of its configured budget.
class budget_exhausted_error : public std::runtime_error {
public:
  explicit budget_exhausted_error(const std::string &what) : std::runtime_error(what) {}
};

// Requested operation is not defined for the given order or right-hand side.
class unsupported_operation : public std::runtime_error {
public:
  explicit unsupported_operation(const std::string &what) : std::runtime_error(what) {}
};

// Enumeration would exceed the configured size guard.
class size_guard_error : public std::runtime_error {
public:
  explicit size_guard_error(const std::string &what) : std::runtime_error(what) {}
};

// Syntax error with position information.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string &what, int line, int column)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line(line), column(column) {}
  int line;
  int column;
};

} // namespace weakrel
