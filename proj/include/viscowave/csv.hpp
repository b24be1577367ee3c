#ifndef VISCOWAVE_CSV_HPP
#define VISCOWAVE_CSV_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace viscowave::csv
{

// Round-trip representation (17 significant digits).
std::string FormatNumber(double value);

void WriteHeader(std::ostream &os, const std::vector<std::string> &columns);
void WriteRow(std::ostream &os, std::span<const double> values);

// Numeric table with a header line. Throws std::runtime_error on malformed input.
struct Table
{
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Table Read(std::istream &is);
Table ReadFile(const std::string &path);

}  // namespace viscowave::csv

#endif  // VISCOWAVE_CSV_HPP
