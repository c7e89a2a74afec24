#pragma once

// Exception hierarchy shared by every polyw module.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polyw {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed word text. position() is a 0-based byte offset into the input.
class parse_error : public error {
 public:
  parse_error(std::size_t position, const std::string& what)
      : error("parse error at position " + std::to_string(position) + ": " + what),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A generator index outside 1..rank.
class rank_error : public error {
 public:
  using error::error;
};

// Input violates an operation's precondition.
class precondition_error : public error {
 public:
  using error::error;
};

// A configured cap (orbit size, multiset size, disk size) was exceeded.
// Callers must treat this as "inconclusive", never as a negative answer.
class resource_error : public error {
 public:
  using error::error;
};

// A constructor's hypotheses do not hold for the given word.
class not_applicable : public error {
 public:
  using error::error;
};

// An invalid side-pairing (unknown slot, reused slot, label mismatch).
class pairing_error : public error {
 public:
  using error::error;
};

}  // namespace polyw
