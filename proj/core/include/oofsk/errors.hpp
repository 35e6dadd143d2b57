// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The oofsk Authors

#pragma once

#include <stdexcept>
#include <string>

namespace oofsk {

// Argument outside the mathematical domain of a function (negative order,
// negative x, degenerate noncentrality, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid or unsupported system/experiment configuration. `field()` names the
// offending configuration key so front-ends can report it.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A numerical procedure (root bracketing, quadrature) failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oofsk
