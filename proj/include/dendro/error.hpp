#pragma once

#include <stdexcept>
#include <string>

namespace dendro {

// Precondition violations and malformed inputs.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

}  // namespace dendro
