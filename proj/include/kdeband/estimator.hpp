#pragma once

#include "kdeband/kernels.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace kdeband {

//! i.i.d. observations X_1, ..., X_n in R^d, stored row-major.
class Sample
{
public:
  Sample(std::size_t dim, std::vector<double> values);
  static Sample univariate(std::vector<double> values);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return values_.size() / dim_; }
  std::span<const double> row(std::size_t i) const;
  const std::vector<double>& values() const { return values_; }

  //! First `n` observations.
  Sample prefix(std::size_t n) const;

private:
  std::size_t dim_;
  std::vector<double> values_;
};

//! Regular lattice over a box C in R^d. Points are ordered with the first
//! axis varying slowest.
class EvaluationGrid
{
public:
  //! Each axis is split into the smallest number of equal steps not
  //! exceeding `step[i]`; the box end points are always grid points.
  EvaluationGrid(std::vector<Interval> region, std::vector<double> step);

  std::size_t dimension() const { return region_.size(); }
  std::size_t size() const { return points_.size() / dimension(); }
  std::span<const double> point(std::size_t i) const;
  const std::vector<Interval>& region() const { return region_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  const std::vector<double>& coordinates() const { return points_; }

  bool operator==(const EvaluationGrid& other) const;

private:
  std::vector<Interval> region_;
  std::vector<double> spacing_;
  std::vector<std::size_t> counts_;
  std::vector<double> points_;
};

//! Default grid step min(h, h_star) / 4 on every axis.
std::vector<double> default_grid_step(std::size_t dim, double h, double h_star);

//! f_n (or f*_n) on a grid.
struct DensityEstimate
{
  std::shared_ptr<const EvaluationGrid> grid;
  std::vector<double> values;
  double bandwidth;
  std::size_t sample_size;
  std::string kernel_id;
};

//! (1 / (n h^d)) sum_j K((x - X_j) / h).
double kde_at_point(const Sample& sample,
                    const Kernel& kernel,
                    double h,
                    std::span<const double> x);

DensityEstimate kde_on_grid(const Sample& sample,
                            const Kernel& kernel,
                            double h,
                            std::shared_ptr<const EvaluationGrid> grid,
                            unsigned workers = 1);

struct GridMaximum
{
  std::size_t index;
  double value;
};

//! Largest value on the grid; ties go to the first index.
GridMaximum sup_on_grid(const DensityEstimate& estimate);

} // namespace kdeband
