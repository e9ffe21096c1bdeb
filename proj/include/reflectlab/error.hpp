#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace reflectlab {

// Library error with a short machine-readable code ("no-cramer-root",
// "factorization-failure", ...) that the CLI surfaces in its error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace reflectlab
