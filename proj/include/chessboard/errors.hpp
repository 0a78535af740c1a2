#pragma once

#include <stdexcept>
#include <string>

namespace chessboard {

// Thrown when an enumeration-backed operation is asked to exceed its
// explicit size guard (e.g. brute-force path enumeration).
struct GuardError : std::runtime_error {
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on file read/write failures.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chessboard
