#include "kdeband/coverage.hpp"
#include "kdeband/errors.hpp"
#include "kdeband/io.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace kdeband {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double phi(double x)
{
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double big_phi(double x)
{
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

constexpr double smoothing_sd = 0.25;

struct Component
{
  double weight;
  double mean;
  double sd;
};

constexpr Component mixture_components[] = { { 0.5, -2.0, 1.0 }, { 0.5, 2.0, 1.0 } };

} // namespace

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t n, std::uint64_t rep)
{
  return splitmix64(splitmix64(splitmix64(master) ^ n) ^ rep);
}

std::vector<std::string> builtin_density_names()
{
  return { "gaussian", "mixture", "compact_beta", "smoothed_uniform" };
}

TrueDensity TrueDensity::builtin(std::string_view name, std::size_t dim)
{
  if (dim == 0)
    throw std::invalid_argument("density dimension must be positive");
  TrueDensity f;
  f.name_ = std::string(name);
  f.dim_ = dim;
  f.tail_exponent_ = std::numeric_limits<double>::infinity();
  if (name == "gaussian") {
    f.kind_ = Kind::gaussian;
  } else if (name == "mixture") {
    f.kind_ = Kind::mixture;
  } else if (name == "compact_beta") {
    f.kind_ = Kind::compact_beta;
    f.compact_ = true;
    // f'' jumps at the support end points.
    f.twice_differentiable_ = false;
  } else if (name == "smoothed_uniform") {
    f.kind_ = Kind::smoothed_uniform;
  } else {
    throw std::invalid_argument("unknown density '" + std::string(name) + "'");
  }
  return f;
}

double TrueDensity::marginal_pdf(double x) const
{
  switch (kind_) {
    case Kind::gaussian:
      return phi(x);
    case Kind::mixture: {
      double sum = 0.0;
      for (const auto& c : mixture_components)
        sum += c.weight * phi((x - c.mean) / c.sd) / c.sd;
      return sum;
    }
    case Kind::compact_beta: {
      if (std::abs(x) > 1.0)
        return 0.0;
      double t = 1.0 - x * x;
      return 0.9375 * t * t;
    }
    case Kind::smoothed_uniform:
      return 0.5 * (big_phi((x + 1.0) / smoothing_sd) - big_phi((x - 1.0) / smoothing_sd));
  }
  return 0.0;
}

double TrueDensity::marginal_cdf(double x) const
{
  switch (kind_) {
    case Kind::gaussian:
      return big_phi(x);
    case Kind::mixture: {
      double sum = 0.0;
      for (const auto& c : mixture_components)
        sum += c.weight * big_phi((x - c.mean) / c.sd);
      return sum;
    }
    case Kind::compact_beta: {
      if (x <= -1.0)
        return 0.0;
      if (x >= 1.0)
        return 1.0;
      double t = 0.5 * (x + 1.0);
      return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    }
    case Kind::smoothed_uniform: {
      auto g = [](double t) { return t * big_phi(t) + phi(t); };
      return 0.5 * smoothing_sd *
             (g((x + 1.0) / smoothing_sd) - g((x - 1.0) / smoothing_sd));
    }
  }
  return 0.0;
}

double TrueDensity::operator()(std::span<const double> x) const
{
  if (x.size() != dim_)
    throw DimensionMismatch("point has dimension " + std::to_string(x.size()) +
                            ", density has dimension " + std::to_string(dim_));
  double value = 1.0;
  for (double xi : x)
    value *= marginal_pdf(xi);
  return value;
}

Sample TrueDensity::sample(Engine& rng, std::size_t n) const
{
  if (n == 0)
    throw std::invalid_argument("sample size must be positive");
  std::vector<double> values(n * dim_);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::gamma_distribution<double> gamma3(3.0, 1.0);
  for (double& v : values) {
    switch (kind_) {
      case Kind::gaussian:
        v = normal(rng);
        break;
      case Kind::mixture: {
        double u = unit(rng);
        const Component* c = &mixture_components[0];
        double acc = c->weight;
        while (u >= acc && c + 1 != std::end(mixture_components)) {
          ++c;
          acc += c->weight;
        }
        v = c->mean + c->sd * normal(rng);
        break;
      }
      case Kind::compact_beta: {
        double g1 = gamma3(rng);
        double g2 = gamma3(rng);
        v = 2.0 * g1 / (g1 + g2) - 1.0;
        break;
      }
      case Kind::smoothed_uniform:
        v = 2.0 * unit(rng) - 1.0 + smoothing_sd * normal(rng);
        break;
    }
  }
  return Sample(dim_, std::move(values));
}

std::vector<Interval> TrueDensity::quantile_box(double tail) const
{
  if (!(tail > 0.0 && tail < 0.5))
    throw std::invalid_argument("tail probability must lie in (0, 1/2)");
  auto quantile = [&](double p) {
    double lo = -60.0;
    double hi = 60.0;
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      if (marginal_cdf(mid) < p)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  Interval axis{ quantile(tail), quantile(1.0 - tail) };
  return std::vector<Interval>(dim_, axis);
}

void validate(const SimulationConfig& config)
{
  if (config.dim == 0)
    throw std::invalid_argument("dimension must be positive");
  if (config.schedule.dim != config.dim)
    throw DimensionMismatch("schedule dimension differs from the density dimension");
  if (config.n_list.empty())
    throw std::invalid_argument("n list is empty");
  for (std::size_t i = 0; i < config.n_list.size(); ++i) {
    if (config.n_list[i] < 3)
      throw std::invalid_argument("every n must be at least 3");
    if (i > 0 && config.n_list[i] <= config.n_list[i - 1])
      throw std::invalid_argument("n list must be strictly increasing");
  }
  if (config.replications == 0)
    throw std::invalid_argument("replications must be at least 1");
  if (config.region && config.region->size() != config.dim)
    throw DimensionMismatch("region dimension differs from the density dimension");
  if (config.step && config.step->size() != config.dim)
    throw DimensionMismatch("grid step dimension differs from the density dimension");
  validate_band_spec(config.band, config.dim);
  Kernel::from_id(config.kernel, config.dim);
  TrueDensity::builtin(config.density, config.dim);
}

namespace {

// Everything a replication at sample size n shares.
struct Setup
{
  TrueDensity density;
  Kernel kernel;
  double h;
  double h_star;
  std::shared_ptr<const EvaluationGrid> grid;
  std::vector<double> truth;
};

Setup make_setup(const SimulationConfig& config, std::size_t n)
{
  auto density = TrueDensity::builtin(config.density, config.dim);
  auto kernel = Kernel::from_id(config.kernel, config.dim);
  double nd = static_cast<double>(n);
  double h = rate_eval(config.schedule.h, nd);
  double h_star = rate_eval(config.schedule.h_star, nd);
  auto region = config.region ? *config.region : density.quantile_box(1e-6);
  auto step = config.step ? *config.step : default_grid_step(config.dim, h, h_star);
  auto grid = std::make_shared<const EvaluationGrid>(region, step);
  std::vector<double> truth(grid->size());
  for (std::size_t i = 0; i < truth.size(); ++i)
    truth[i] = density(grid->point(i));
  return { std::move(density), std::move(kernel), h, h_star, std::move(grid), std::move(truth) };
}

bool covers(const SimulationConfig& config, const Setup& setup, const Sample& sample)
{
  auto fn = kde_on_grid(sample, setup.kernel, setup.h, setup.grid);
  auto fstar = setup.h_star == setup.h ? fn
                                       : kde_on_grid(sample, setup.kernel, setup.h_star, setup.grid);
  auto band = build_band(config.band, setup.kernel, config.schedule, fstar, fn);
  return band_contains(band, setup.truth).contained;
}

[[noreturn]] void rethrow_with_context(std::exception_ptr error, const std::string& context)
{
  try {
    std::rethrow_exception(error);
  } catch (const DataError& e) {
    throw DataError(context + ": " + e.what());
  } catch (const DimensionMismatch& e) {
    throw DimensionMismatch(context + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw std::domain_error(context + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(context + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(context + ": " + e.what());
  }
}

} // namespace

std::vector<std::uint8_t> simulate_misses(const SimulationConfig& config, std::size_t n)
{
  Setup setup = make_setup(config, n);
  const std::size_t reps = config.replications;
  std::vector<std::uint8_t> misses(reps, 0);
  std::vector<std::exception_ptr> errors(reps);

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      try {
        Engine rng(stream_seed(config.seed, n, r));
        Sample sample = setup.density.sample(rng, n);
        misses[r] = covers(config, setup, sample) ? 0 : 1;
      } catch (...) {
        errors[r] = std::current_exception();
        return;
      }
    }
  };

  unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(reps)));
  if (workers == 1) {
    run(0, reps);
  } else {
    std::vector<std::jthread> threads;
    std::size_t chunk = (reps + workers - 1) / workers;
    for (std::size_t begin = 0; begin < reps; begin += chunk)
      threads.emplace_back(run, begin, std::min(reps, begin + chunk));
  }
  for (std::size_t r = 0; r < reps; ++r) {
    if (errors[r])
      rethrow_with_context(errors[r],
                           "replication " + std::to_string(r) + " (n = " + std::to_string(n) + ")");
  }
  return misses;
}

CoverageReport simulate_noncoverage(const SimulationConfig& config)
{
  validate(config);
  CoverageReport report{ config, {} };
  const double d = static_cast<double>(config.dim);
  for (std::size_t n : config.n_list) {
    auto misses = simulate_misses(config, n);
    std::size_t m = 0;
    for (auto x : misses)
      m += x;
    double reps = static_cast<double>(config.replications);
    double phat = static_cast<double>(m) / reps;
    double nd = static_cast<double>(n);
    double w_n = nd * std::pow(rate_eval(config.schedule.h_star, nd), d) /
                 std::pow(rate_eval(config.schedule.v, nd), 2.0);
    report.entries.push_back(
      { n, config.replications, m, phat, std::sqrt(phat * (1.0 - phat) / reps), w_n });
  }
  return report;
}

std::string_view to_string(Correction c)
{
  return c == Correction::half ? "half" : "none";
}

Correction parse_correction(std::string_view name)
{
  if (name == "none")
    return Correction::none;
  if (name == "half")
    return Correction::half;
  throw std::invalid_argument("unknown correction '" + std::string(name) +
                              "' (expected none or half)");
}

LogLevelFit fit_log_level(std::span<const double> w, std::span<const double> p)
{
  if (w.size() != p.size())
    throw std::invalid_argument("speeds and probabilities differ in length");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (p[i] > 0.0) {
      xs.push_back(w[i]);
      ys.push_back(std::log(p[i]));
    }
  }
  const std::size_t k = xs.size();
  if (k < 2)
    throw std::domain_error("log-level fit needs at least two points with positive probability");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0))
    throw std::domain_error("log-level fit needs at least two distinct speeds");
  LogLevelFit fit{};
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points_used = k;
  if (k > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
      ssr += r * r;
    }
    fit.slope_se = std::sqrt(ssr / static_cast<double>(k - 2) / sxx);
  }
  return fit;
}

LogLevelFit fit_log_level(const CoverageReport& report, Correction correction)
{
  bool any_zero = std::any_of(report.entries.begin(), report.entries.end(), [](const auto& e) {
    return e.misses == 0;
  });
  bool corrected = correction == Correction::half && any_zero;
  std::vector<double> w;
  std::vector<double> p;
  for (const auto& e : report.entries) {
    w.push_back(e.w_n);
    p.push_back(corrected ? (static_cast<double>(e.misses) + 0.5) /
                              (static_cast<double>(e.replications) + 1.0)
                          : e.phat);
  }
  auto fit = fit_log_level(w, p);
  fit.corrected = corrected;
  return fit;
}

Sample nested_sample(const TrueDensity& density, std::uint64_t seed, std::size_t n)
{
  Engine rng(stream_seed(seed, 0, 0));
  return density.sample(rng, n);
}

AlmostSurePath almost_sure_probe(const SimulationConfig& config, std::uint64_t seed)
{
  validate(config);
  AlmostSurePath path{ seed, config.n_list, {}, std::nullopt };
  auto density = TrueDensity::builtin(config.density, config.dim);
  Sample full = nested_sample(density, seed, config.n_list.back());
  for (std::size_t n : config.n_list) {
    Setup setup = make_setup(config, n);
    bool ok = false;
    try {
      ok = covers(config, setup, full.prefix(n));
    } catch (...) {
      rethrow_with_context(std::current_exception(),
                           "path seed " + std::to_string(seed) + " (n = " + std::to_string(n) + ")");
    }
    path.covered.push_back(ok ? 1 : 0);
    if (!ok)
      path.last_miss = n;
  }
  return path;
}

AlmostSureStudy almost_sure_study(const SimulationConfig& config,
                                  std::size_t paths,
                                  std::size_t beyond)
{
  if (paths == 0)
    throw std::invalid_argument("almost-sure study needs at least one path");
  validate(config);
  AlmostSureStudy study{ std::vector<AlmostSurePath>(paths), beyond, 0.0 };
  std::vector<std::exception_ptr> errors(paths);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      try {
        study.paths[k] = almost_sure_probe(config, config.seed + k);
      } catch (...) {
        errors[k] = std::current_exception();
        return;
      }
    }
  };
  unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(paths)));
  if (workers == 1) {
    run(0, paths);
  } else {
    std::vector<std::jthread> threads;
    std::size_t chunk = (paths + workers - 1) / workers;
    for (std::size_t begin = 0; begin < paths; begin += chunk)
      threads.emplace_back(run, begin, std::min(paths, begin + chunk));
  }
  for (auto& e : errors) {
    if (e)
      std::rethrow_exception(e);
  }
  std::size_t clean = 0;
  for (const auto& p : study.paths) {
    if (!p.last_miss || *p.last_miss <= beyond)
      ++clean;
  }
  study.fraction_clean = static_cast<double>(clean) / static_cast<double>(paths);
  return study;
}

} // namespace kdeband
