#pragma once

#include <stdexcept>
#include <string>

namespace shforge {

// Recoverable failure; the message names the violated rule or input defect.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem / stream failure, kept separate so callers can map it to a
// distinct exit code.
class IoError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(message);
}

}  // namespace shforge
