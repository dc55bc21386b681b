#pragma once

#include <stdexcept>
#include <string>

namespace hybell {

// A parameter lies outside its physical domain (efficiency not in [0,1],
// negative rate, zero-width distribution, ...).
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The requested Fock-space truncation cannot represent the state: the Poisson
// tail of the coherent amplitude beyond n_max is too heavy.  Carries the
// truncation that would have sufficed.
class truncation_error : public std::runtime_error {
 public:
  truncation_error(const std::string& what, int required)
      : std::runtime_error(what), required_n_max(required) {}
  int required_n_max;
};

// A numerical procedure failed in a way that must not be silently absorbed
// (degenerate spectral filter, unbracketed root, non-finite result, ...).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hybell
