#pragma once

#include "kdeband/estimator.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace kdeband {

struct ConfidenceBand;

//! Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

//! One observation per row, comma separated. A first row that does not
//! parse as numbers is taken as a header. Throws DataError naming the line.
Sample read_sample_csv(std::istream& in);
Sample read_sample_csv(const std::string& path);

//! Columns x1..xd, value.
void write_estimate_csv(std::ostream& out, const DensityEstimate& estimate);
//! Columns x1..xd, center, lower, upper, half_width, truncation_triggered.
void write_band_csv(std::ostream& out, const ConfidenceBand& band);

} // namespace kdeband
