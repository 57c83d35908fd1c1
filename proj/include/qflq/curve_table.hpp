#ifndef QFLQ_CURVE_TABLE_HPP
#define QFLQ_CURVE_TABLE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qflq {

// Shortest representation that round-trips, at most 17 significant digits.
std::string format_double(double v);

// Rectangular table of finite reals with a header row.
struct CurveTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void append_row(std::vector<double> row);
  void write_csv(std::ostream& os) const;
  std::string to_csv() const;
};

}  // namespace qflq

#endif
