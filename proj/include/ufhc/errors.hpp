#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ufhc {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter lies outside the admissible domain of a family or operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An analytic majorant for an inverse-weight series diverges (or none exists).
class NonSummable : public Error {
 public:
  NonSummable(std::string what, bool proved_divergent)
      : Error(std::move(what)), proved_divergent_(proved_divergent) {}

  bool proved_divergent() const noexcept { return proved_divergent_; }

 private:
  bool proved_divergent_;
};

// The planner would exceed the caller's budget cap.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string what, std::uint64_t tau, std::uint64_t l_tau)
      : Error(std::move(what)), tau_(tau), l_tau_(l_tau) {}

  std::uint64_t tau() const noexcept { return tau_; }
  std::uint64_t l_tau() const noexcept { return l_tau_; }

 private:
  std::uint64_t tau_;
  std::uint64_t l_tau_;
};

// A configuration failed validation; carries one message per offending field.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> errors)
      : Error(join(errors)), errors_(std::move(errors)) {}

  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& errors) {
    std::string out = "invalid configuration";
    for (const auto& e : errors) {
      out += "; ";
      out += e;
    }
    return out;
  }

  std::vector<std::string> errors_;
};

}  // namespace ufhc
