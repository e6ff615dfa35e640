#include "maob/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace maob {

namespace {

std::string g17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_field(std::ostream& out, const ScalarField& v, double q) {
  const Grid& g = v.grid;
  out << "MAOB-FIELD v1\n" << g.dim() << " " << g17(q) << "\n";
  for (int a = 0; a < g.dim(); ++a) {
    if (a) out << " ";
    out << g17(g.lo()[a]) << " " << g17(g.hi()[a]) << " " << g.nodes(a);
  }
  out << "\n";
  for (std::size_t i = 0; i < v.size(); ++i) out << (v.inside(i) ? g17(v.values[i]) : "nan") << "\n";
}

void write_field(const std::string& path, const ScalarField& v, double q) {
  std::ofstream out(path);
  if (!out) throw FieldFormatError("cannot open " + path);
  write_field(out, v, q);
  if (!out) throw FieldFormatError("write failed: " + path);
}

FieldFile read_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "MAOB-FIELD v1") throw FieldFormatError("missing MAOB-FIELD v1 header");
  int n = 0;
  FieldFile f;
  if (!std::getline(in, line)) throw FieldFormatError("missing dimension line");
  {
    std::istringstream ls(line);
    if (!(ls >> n >> f.q) || n < 1) throw FieldFormatError("bad dimension line");
  }
  if (!std::getline(in, line)) throw FieldFormatError("missing grid line");
  std::vector<double> lo(n), hi(n);
  std::vector<int> res(n);
  {
    std::istringstream ls(line);
    for (int a = 0; a < n; ++a) {
      int nodes = 0;
      if (!(ls >> lo[a] >> hi[a] >> nodes) || nodes < 2) throw FieldFormatError("bad grid line");
      res[a] = nodes - 1;
    }
  }
  Grid g(lo, hi, res);
  std::vector<std::uint8_t> mask(g.node_count(), 0);
  ScalarField v(g, mask);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!std::getline(in, line)) throw FieldFormatError("truncated values");
    if (line == "nan") {
      v.values[i] = std::nan("");
      continue;
    }
    char* end = nullptr;
    const double x = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || *end != '\0' || std::isnan(x)) throw FieldFormatError("bad value: " + line);
    v.values[i] = x;
    v.mask[i] = 1;
  }
  return FieldFile{std::move(v), f.q};
}

FieldFile read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FieldFormatError("cannot open " + path);
  return read_field(in);
}

}  // namespace maob
