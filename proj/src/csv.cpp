#include "viscowave/csv.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace viscowave::csv
{

std::string FormatNumber(double value)
{
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void WriteHeader(std::ostream &os, const std::vector<std::string> &columns)
{
  for (std::size_t i = 0; i < columns.size(); i++)
  {
    os << (i ? "," : "") << columns[i];
  }
  os << '\n';
}

void WriteRow(std::ostream &os, std::span<const double> values)
{
  for (std::size_t i = 0; i < values.size(); i++)
  {
    os << (i ? "," : "") << FormatNumber(values[i]);
  }
  os << '\n';
}

namespace
{

std::vector<std::string> SplitFields(const std::string &line)
{
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ','))
  {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  return fields;
}

bool ParseNumber(const std::string &text, double &value)
{
  if (text.empty())
  {
    return false;
  }
  std::size_t consumed = 0;
  try
  {
    value = std::stod(text, &consumed);
  }
  catch (const std::exception &)
  {
    return false;
  }
  return consumed == text.size();
}

}  // namespace

Table Read(std::istream &is)
{
  Table table;
  std::string line;
  bool first = true;
  int line_number = 0;
  while (std::getline(is, line))
  {
    line_number++;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#')
    {
      continue;
    }
    const auto fields = SplitFields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); i++)
    {
      numeric = numeric && ParseNumber(fields[i], row[i]);
    }
    if (!numeric)
    {
      if (!first)
      {
        throw std::runtime_error("non-numeric value on CSV line " + std::to_string(line_number));
      }
      table.columns = fields;
    }
    else
    {
      if (!table.rows.empty() && row.size() != table.rows.front().size())
      {
        throw std::runtime_error("ragged CSV row on line " + std::to_string(line_number));
      }
      table.rows.push_back(std::move(row));
    }
    first = false;
  }
  return table;
}

Table ReadFile(const std::string &path)
{
  std::ifstream is(path);
  if (!is)
  {
    throw std::runtime_error("cannot open " + path);
  }
  return Read(is);
}

}  // namespace viscowave::csv
