#pragma once

#include "maob/geometry.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace maob {

class FieldFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text field dump:
///   MAOB-FIELD v1
///   n q
///   lo_1 hi_1 nodes_1 ... lo_n hi_n nodes_n
///   one value per line in row-major node order, 17 significant digits,
///   `nan` for nodes outside the mask.
struct FieldFile {
  ScalarField field;
  double q = 0.0;
};

void write_field(std::ostream& out, const ScalarField& v, double q);
void write_field(const std::string& path, const ScalarField& v, double q);
FieldFile read_field(std::istream& in);
FieldFile read_field(const std::string& path);

}  // namespace maob
