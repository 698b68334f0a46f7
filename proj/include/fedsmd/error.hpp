// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fedsmd {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violated an operation's precondition (bad dimension,
/// point outside the domain, non-finite input, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A configuration could not be parsed or failed validation. `field()` names
/// the offending key, `line()` is the 1-based line for parse errors (0 if
/// not applicable).
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message,
              std::size_t line = 0)
      : Error(message), field_(std::move(field)), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

/// A runtime invariant of the engine was violated. This signals an
/// implementation defect, not a modelling outcome.
class InvariantViolation : public Error {
 public:
  InvariantViolation(std::size_t agent, std::size_t iteration,
                     const std::string& message)
      : Error(message), agent_(agent), iteration_(iteration) {}

  std::size_t agent() const noexcept { return agent_; }
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t agent_;
  std::size_t iteration_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedsmd
