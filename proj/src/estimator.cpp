#include "kdeband/estimator.hpp"
#include "kdeband/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace kdeband {

Sample::Sample(std::size_t dim, std::vector<double> values)
  : dim_(dim)
  , values_(std::move(values))
{
  if (dim_ == 0)
    throw std::invalid_argument("sample dimension must be positive");
  if (values_.empty())
    throw DataError("sample is empty");
  if (values_.size() % dim_ != 0)
    throw DimensionMismatch("sample values are not a whole number of rows");
  for (double v : values_) {
    if (!std::isfinite(v))
      throw DataError("sample contains a non-finite value");
  }
}

Sample Sample::univariate(std::vector<double> values)
{
  return Sample(1, std::move(values));
}

std::span<const double> Sample::row(std::size_t i) const
{
  return { values_.data() + i * dim_, dim_ };
}

Sample Sample::prefix(std::size_t n) const
{
  if (n == 0 || n > size())
    throw std::out_of_range("prefix length must lie in [1, sample size]");
  return Sample(dim_, std::vector<double>(values_.begin(), values_.begin() + n * dim_));
}

EvaluationGrid::EvaluationGrid(std::vector<Interval> region, std::vector<double> step)
  : region_(std::move(region))
{
  const std::size_t d = region_.size();
  if (d == 0)
    throw std::invalid_argument("grid region needs at least one axis");
  if (step.size() == 1 && d > 1)
    step.assign(d, step[0]);
  if (step.size() != d)
    throw DimensionMismatch("grid step has " + std::to_string(step.size()) +
                            " entries for a " + std::to_string(d) + "-d region");

  std::vector<std::vector<double>> axes(d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto& iv = region_[i];
    if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper) || !(iv.upper >= iv.lower))
      throw std::invalid_argument("grid axis " + std::to_string(i + 1) +
                                  " needs finite bounds with lower <= upper");
    if (!std::isfinite(step[i]) || !(step[i] > 0.0))
      throw std::invalid_argument("grid step must be positive");
    if (iv.length() == 0.0) {
      counts_.push_back(1);
      spacing_.push_back(0.0);
      axes[i] = { iv.lower };
      continue;
    }
    double steps = std::ceil(iv.length() / step[i] - 1e-9);
    auto count = static_cast<std::size_t>(std::max(1.0, steps)) + 1;
    counts_.push_back(count);
    double h = iv.length() / static_cast<double>(count - 1);
    spacing_.push_back(h);
    axes[i].resize(count);
    for (std::size_t k = 0; k + 1 < count; ++k)
      axes[i][k] = iv.lower + static_cast<double>(k) * h;
    axes[i][count - 1] = iv.upper;
  }

  std::size_t total = 1;
  for (auto c : counts_)
    total *= c;
  points_.reserve(total * d);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t i = 0; i < d; ++i)
      points_.push_back(axes[i][idx[i]]);
    for (std::size_t axis = d; axis-- > 0;) {
      if (++idx[axis] < counts_[axis])
        break;
      idx[axis] = 0;
    }
  }
}

std::span<const double> EvaluationGrid::point(std::size_t i) const
{
  return { points_.data() + i * dimension(), dimension() };
}

bool EvaluationGrid::operator==(const EvaluationGrid& other) const
{
  return points_ == other.points_ && counts_ == other.counts_;
}

std::vector<double> default_grid_step(std::size_t dim, double h, double h_star)
{
  if (!(h > 0.0) || !(h_star > 0.0))
    throw std::invalid_argument("bandwidths must be positive");
  return std::vector<double>(dim, std::min(h, h_star) / 4.0);
}

namespace {

void check_bandwidth(double h)
{
  if (!std::isfinite(h) || !(h > 0.0))
    throw std::invalid_argument("bandwidth must be positive");
}

// sum_j K((x - X_j) / h) in sample order; `scratch` holds d values.
double kernel_sum(const Sample& sample,
                  const Kernel& kernel,
                  double inv_h,
                  const double* x,
                  std::vector<double>& scratch)
{
  const std::size_t d = sample.dimension();
  const std::size_t n = sample.size();
  const double* data = sample.values().data();
  double sum = 0.0;
  if (d == 1) {
    for (std::size_t j = 0; j < n; ++j) {
      double u = (x[0] - data[j]) * inv_h;
      sum += kernel.evaluate_unchecked(&u);
    }
    return sum;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double* row = data + j * d;
    for (std::size_t i = 0; i < d; ++i)
      scratch[i] = (x[i] - row[i]) * inv_h;
    sum += kernel.evaluate_unchecked(scratch.data());
  }
  return sum;
}

double normalisation(std::size_t n, double h, std::size_t d)
{
  return 1.0 / (static_cast<double>(n) * std::pow(h, static_cast<double>(d)));
}

} // namespace

double kde_at_point(const Sample& sample,
                    const Kernel& kernel,
                    double h,
                    std::span<const double> x)
{
  check_bandwidth(h);
  if (kernel.dimension() != sample.dimension())
    throw DimensionMismatch("kernel and sample dimensions differ");
  if (x.size() != sample.dimension())
    throw DimensionMismatch("evaluation point has dimension " + std::to_string(x.size()) +
                            ", sample has dimension " +
                            std::to_string(sample.dimension()));
  std::vector<double> scratch(sample.dimension());
  return kernel_sum(sample, kernel, 1.0 / h, x.data(), scratch) *
         normalisation(sample.size(), h, sample.dimension());
}

DensityEstimate kde_on_grid(const Sample& sample,
                            const Kernel& kernel,
                            double h,
                            std::shared_ptr<const EvaluationGrid> grid,
                            unsigned workers)
{
  check_bandwidth(h);
  if (!grid)
    throw std::invalid_argument("grid is null");
  if (kernel.dimension() != sample.dimension())
    throw DimensionMismatch("kernel and sample dimensions differ");
  if (grid->dimension() != sample.dimension())
    throw DimensionMismatch("grid and sample dimensions differ");

  const std::size_t m = grid->size();
  const double inv_h = 1.0 / h;
  const double scale = normalisation(sample.size(), h, sample.dimension());
  std::vector<double> values(m);

  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch(sample.dimension());
    for (std::size_t p = begin; p < end; ++p)
      values[p] = kernel_sum(sample, kernel, inv_h, grid->point(p).data(), scratch) * scale;
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(m)));
  if (workers == 1) {
    run(0, m);
  } else {
    std::vector<std::jthread> threads;
    std::size_t chunk = (m + workers - 1) / workers;
    for (std::size_t begin = 0; begin < m; begin += chunk)
      threads.emplace_back(run, begin, std::min(m, begin + chunk));
  }
  return { std::move(grid), std::move(values), h, sample.size(), kernel.id() };
}

GridMaximum sup_on_grid(const DensityEstimate& estimate)
{
  if (estimate.values.empty())
    throw std::invalid_argument("cannot take the supremum over an empty grid");
  auto it = std::max_element(estimate.values.begin(), estimate.values.end());
  return { static_cast<std::size_t>(it - estimate.values.begin()), *it };
}

} // namespace kdeband
