#include "qflq/curve_table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "qflq/errors.hpp"

namespace qflq {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void CurveTable::append_row(std::vector<double> row) {
  if (row.size() != header.size())
    throw StructuralError("CurveTable: row width " + std::to_string(row.size()) +
                          " does not match header width " + std::to_string(header.size()));
  for (double v : row)
    if (!std::isfinite(v)) throw StructuralError("CurveTable: non-finite value");
  rows.push_back(std::move(row));
}

void CurveTable::write_csv(std::ostream& os) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_double(row[i]);
    }
    os << '\n';
  }
}

std::string CurveTable::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

}  // namespace qflq
