#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anoneval {

// Every failure raised by the library derives from Error. The CLI maps
// ConfigError and ArgumentError to exit code 2 and everything else to 3.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  // Short machine-readable tag used in "NA:<reason>" report cells.
  virtual const char* reason() const noexcept { return "error"; }
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }
  const char* reason() const noexcept override { return "parse-error"; }

private:
  std::size_t line_;
};

class ArgumentError : public Error {
public:
  using Error::Error;
  const char* reason() const noexcept override { return "argument-error"; }
};

class IncompatibleGraphs : public Error {
public:
  using Error::Error;
  const char* reason() const noexcept override { return "incompatible-graphs"; }
};

class BudgetError : public Error {
public:
  using Error::Error;
  const char* reason() const noexcept override { return "budget-error"; }
};

class UndefinedMetric : public Error {
public:
  using Error::Error;
  const char* reason() const noexcept override { return "undefined-metric"; }
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double last_estimate)
      : Error(what), last_estimate_(last_estimate) {}
  double last_estimate() const noexcept { return last_estimate_; }
  const char* reason() const noexcept override { return "no-convergence"; }

private:
  double last_estimate_;
};

class ConfigError : public Error {
public:
  using Error::Error;
  const char* reason() const noexcept override { return "config-error"; }
};

class IoError : public Error {
public:
  using Error::Error;
  const char* reason() const noexcept override { return "io-error"; }
};

}  // namespace anoneval
