#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elex {

// Base error for contract violations surfaced to callers (bad arguments,
// malformed files, type-universe mismatches).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// CE text parse failure; carries the 0-based character offset of the token
// that triggered it.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace elex
