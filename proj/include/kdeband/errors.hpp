#pragma once

#include <stdexcept>

namespace kdeband {

//! A point, sample or kernel has the wrong number of coordinates.
class DimensionMismatch : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//! Input data cannot be used: unparsable rows, empty samples, or an
//! estimate that leaves a band undefined.
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace kdeband
