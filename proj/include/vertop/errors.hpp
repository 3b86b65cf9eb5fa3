#pragma once

#include <stdexcept>
#include <string>

namespace vertop {

/// Division by zero or other arithmetic misuse in the coefficient field.
struct arithmetic_error : std::runtime_error {
  explicit arithmetic_error(const std::string& what) : std::runtime_error(what) {}
};

/// A computation was requested at a precision the inputs cannot support.
struct precision_error : std::runtime_error {
  int required;
  int available;
  precision_error(int required_, int available_, const std::string& ctx)
      : std::runtime_error("insufficient precision in " + ctx + ": required " +
                           std::to_string(required_) + ", have " +
                           std::to_string(available_)),
        required(required_), available(available_) {}
};

/// Operation applied on a model space that does not support it.
struct model_error : std::runtime_error {
  explicit model_error(const std::string& what) : std::runtime_error(what) {}
};

/// Inconsistent induced-module specification (bad annihilators, runaway rewrite).
struct spec_error : std::runtime_error {
  explicit spec_error(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax error with byte offset and the tokens that would have been accepted.
struct parse_error : std::runtime_error {
  std::size_t offset;
  std::string expected;
  parse_error(std::size_t offset_, const std::string& expected_)
      : std::runtime_error("parse error at byte " + std::to_string(offset_) +
                           ": expected " + expected_),
        offset(offset_), expected(expected_) {}
};

}  // namespace vertop
