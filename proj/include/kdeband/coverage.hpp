#pragma once

#include "kdeband/bands.hpp"
#include "kdeband/estimator.hpp"
#include "kdeband/kernels.hpp"
#include "kdeband/schedules.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kdeband {

using Engine = std::mt19937_64;

//! Seed of the stream used for replication `rep` at sample size `n`:
//! splitmix64(splitmix64(splitmix64(master) ^ n) ^ rep). Every replication
//! owns its stream, so results do not depend on how work is scheduled.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t n, std::uint64_t rep);

//! A known density f with an exact sampler. Multivariate versions are
//! products of i.i.d. copies of the univariate marginal.
class TrueDensity
{
public:
  //! "gaussian", "mixture" (0.5 N(-2,1) + 0.5 N(2,1)), "compact_beta"
  //! (2 Beta(3,3) - 1, i.e. (15/16)(1 - x^2)^2 on [-1, 1]),
  //! "smoothed_uniform" (U[-1,1] + N(0, 0.25^2)).
  static TrueDensity builtin(std::string_view name, std::size_t dim = 1);

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return dim_; }

  double operator()(std::span<const double> x) const;
  double marginal_pdf(double x) const;
  double marginal_cdf(double x) const;

  //! n observations drawn row by row from `rng`.
  Sample sample(Engine& rng, std::size_t n) const;

  //! Box [q(tail), q(1 - tail)]^d from the marginal quantiles.
  std::vector<Interval> quantile_box(double tail = 1e-6) const;

  //! Largest q with ||z||^q f(z) bounded; infinity for every built-in.
  double tail_exponent() const { return tail_exponent_; }
  bool twice_differentiable() const { return twice_differentiable_; }
  bool compact_support() const { return compact_; }

private:
  enum class Kind
  {
    gaussian,
    mixture,
    compact_beta,
    smoothed_uniform
  };

  TrueDensity() = default;

  std::string name_;
  std::size_t dim_{ 1 };
  Kind kind_{ Kind::gaussian };
  double tail_exponent_{ 0.0 };
  bool twice_differentiable_{ true };
  bool compact_{ false };
};

std::vector<std::string> builtin_density_names();

struct SimulationConfig
{
  std::string density{ "gaussian" };
  std::size_t dim{ 1 };
  std::string kernel{ "epanechnikov" };
  ScheduleSet schedule;
  BandSpec band;
  //! Region C; defaults to the density's 1e-6 quantile box.
  std::optional<std::vector<Interval>> region;
  //! Grid step; defaults to min(h, h*) / 4 per axis at each n.
  std::optional<std::vector<double>> step;
  std::vector<std::size_t> n_list;
  std::size_t replications{ 100 };
  std::uint64_t seed{ 42 };
  //! Threads; never changes the results.
  unsigned workers{ 1 };
};

void validate(const SimulationConfig& config);

struct CoverageEntry
{
  std::size_t n;
  std::size_t replications;
  std::size_t misses;
  double phat;
  double se;
  //! n h*^d / v^2
  double w_n;
};

struct CoverageReport
{
  SimulationConfig config;
  std::vector<CoverageEntry> entries;
};

//! Per-replication outcomes at one sample size, in replication order.
std::vector<std::uint8_t> simulate_misses(const SimulationConfig& config, std::size_t n);

CoverageReport simulate_noncoverage(const SimulationConfig& config);

enum class Correction
{
  none,
  half //!< (m + 1/2) / (R + 1) at every point when any m = 0
};

std::string_view to_string(Correction c);
Correction parse_correction(std::string_view name);

struct LogLevelFit
{
  //! Estimate of -gamma.
  double slope;
  double intercept;
  //! Unavailable with only two points.
  std::optional<double> slope_se;
  std::size_t points_used;
  bool corrected;
};

//! Least squares of log p against w.
LogLevelFit fit_log_level(std::span<const double> w, std::span<const double> p);
LogLevelFit fit_log_level(const CoverageReport& report, Correction correction);

struct AlmostSurePath
{
  std::uint64_t seed;
  std::vector<std::size_t> n_grid;
  std::vector<std::uint8_t> covered;
  //! Largest n with a miss; nullopt when none was observed.
  std::optional<std::size_t> last_miss;
};

//! The prefix-nested sample behind one almost-sure path.
Sample nested_sample(const TrueDensity& density, std::uint64_t seed, std::size_t n);

//! One sample path: bands from the first n observations of a single stream,
//! for every n in config.n_list.
AlmostSurePath almost_sure_probe(const SimulationConfig& config, std::uint64_t seed);

struct AlmostSureStudy
{
  std::vector<AlmostSurePath> paths;
  std::size_t beyond;
  //! Share of paths without a miss at any n > beyond.
  double fraction_clean;
};

//! `paths` probes with seeds config.seed, config.seed + 1, ...
AlmostSureStudy almost_sure_study(const SimulationConfig& config,
                                  std::size_t paths,
                                  std::size_t beyond);

} // namespace kdeband
