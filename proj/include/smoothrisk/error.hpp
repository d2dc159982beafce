#pragma once

#include <stdexcept>
#include <string>

namespace smoothrisk {

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numeric routine cannot produce a finite, trustworthy result.
/// `diagnostics` carries whatever state is useful for a post-mortem.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, std::string diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace smoothrisk
