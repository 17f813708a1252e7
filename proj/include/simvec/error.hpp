#pragma once

#include <stdexcept>
#include <string>

namespace simvec {

// Base for every error the library raises on bad input or failed
// preconditions. Programming errors still assert.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace simvec
