#include "kdeband/io.hpp"
#include "kdeband/bands.hpp"
#include "kdeband/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace kdeband {

std::string format_double(double value)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc())
    throw std::runtime_error("cannot format number");
  return std::string(buf, ptr);
}

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_row(std::string_view line, std::vector<double>& out)
{
  out.clear();
  while (true) {
    auto comma = line.find(',');
    auto field = trim(line.substr(0, comma));
    if (!field.empty() && field.front() == '+')
      field.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
      return false;
    out.push_back(v);
    if (comma == std::string_view::npos)
      return true;
    line = line.substr(comma + 1);
  }
}

void write_header(std::ostream& out, std::size_t dim)
{
  for (std::size_t i = 0; i < dim; ++i)
    out << 'x' << (i + 1) << ',';
}

void write_point(std::ostream& out, std::span<const double> x)
{
  for (double xi : x)
    out << format_double(xi) << ',';
}

} // namespace

Sample read_sample_csv(std::istream& in)
{
  std::string line;
  std::vector<double> values;
  std::vector<double> row;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    auto content = trim(line);
    if (content.empty())
      continue;
    if (!parse_row(content, row)) {
      if (first) {
        first = false;
        continue; // header
      }
      throw DataError("line " + std::to_string(line_no) + ": cannot parse '" +
                      std::string(content) + "' as numbers");
    }
    first = false;
    if (dim == 0)
      dim = row.size();
    if (row.size() != dim)
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                      " columns, found " + std::to_string(row.size()));
    values.insert(values.end(), row.begin(), row.end());
  }
  if (values.empty())
    throw DataError("sample file contains no observations");
  return Sample(dim, std::move(values));
}

Sample read_sample_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::ios_base::failure("cannot open '" + path + "'");
  return read_sample_csv(in);
}

void write_estimate_csv(std::ostream& out, const DensityEstimate& estimate)
{
  const auto& grid = *estimate.grid;
  write_header(out, grid.dimension());
  out << "value\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    write_point(out, grid.point(i));
    out << format_double(estimate.values[i]) << '\n';
  }
}

void write_band_csv(std::ostream& out, const ConfidenceBand& band)
{
  const auto& grid = *band.grid;
  write_header(out, grid.dimension());
  out << "center,lower,upper,half_width,truncation_triggered\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& iv = band.intervals[i];
    write_point(out, grid.point(i));
    out << format_double(iv.center) << ',' << format_double(iv.lower()) << ','
        << format_double(iv.upper()) << ',' << format_double(iv.half_width) << ','
        << static_cast<int>(band.truncation_triggered[i]) << '\n';
  }
}

} // namespace kdeband
