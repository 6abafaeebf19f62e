#pragma once

#include <stdexcept>
#include <string>

namespace almlab {

// Raised for violated preconditions and invalid geometric inputs. The CLI maps
// it to exit status 1 and prints what() verbatim.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace almlab
