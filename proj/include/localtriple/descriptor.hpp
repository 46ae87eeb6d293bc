#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "localtriple/matrix_coefficients.hpp"

namespace lt {

// Malformed descriptor text; position is the 0-based offset of the offending character.
class ParseError : public DomainError {
 public:
  ParseError(std::size_t position, const std::string& what);
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Descriptor grammar:
//   unram(z1,z2) | special(z) | ps(k1,j1,z1;k2,j2,z2) | one(k,j,z;z_unram) | sc(c,w,seed)
// with w one of w0, w(k,j,z) or a value z for an unramified central character. A value is
// re, imi, re+imi, exp(theta) or qpow(t) = q^t; reals accept pi, products and quotients.
// Values off the unit circle need the tau= prefix.
RepDescriptor parse_descriptor(const Characters& X, std::string_view text);

// A single value in the same syntax.
cplx parse_value(std::string_view text, int q);

}  // namespace lt
