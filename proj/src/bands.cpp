#include "kdeband/bands.hpp"
#include "kdeband/errors.hpp"
#include "kdeband/io.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kdeband {

std::string_view to_string(Truncation t)
{
  switch (t) {
    case Truncation::none:
      return "none";
    case Truncation::tilde:
      return "tilde";
    case Truncation::sup:
      return "sup";
  }
  return "?";
}

std::string_view to_string(BandFamily f)
{
  switch (f) {
    case BandFamily::hat:
      return "hat";
    case BandFamily::check:
      return "check";
    case BandFamily::bickel_rosenblatt:
      return "br";
    case BandFamily::translated:
      return "translated";
    case BandFamily::simplified:
      return "simplified";
    case BandFamily::truncated:
      return "truncated";
  }
  return "?";
}

Truncation parse_truncation(std::string_view name)
{
  for (auto t : { Truncation::none, Truncation::tilde, Truncation::sup }) {
    if (name == to_string(t))
      return t;
  }
  throw std::invalid_argument("unknown truncation '" + std::string(name) +
                              "' (expected none, tilde or sup)");
}

BandFamily parse_band_family(std::string_view name)
{
  for (auto f : { BandFamily::hat,
                  BandFamily::check,
                  BandFamily::bickel_rosenblatt,
                  BandFamily::translated,
                  BandFamily::simplified,
                  BandFamily::truncated }) {
    if (name == to_string(f))
      return f;
  }
  throw std::invalid_argument("unknown band family '" + std::string(name) + "'");
}

std::vector<double> truncate_tilde(const DensityEstimate& fn, double eps_n)
{
  if (!(eps_n > 0.0) || !std::isfinite(eps_n))
    throw std::invalid_argument("eps_n must be positive");
  std::vector<double> out(fn.values.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = fn.values[i] >= eps_n ? fn.values[i] : eps_n;
  return out;
}

std::vector<double> truncate_sup(const DensityEstimate& fn, double eps_n)
{
  if (!(eps_n > 0.0 && eps_n <= 1.0))
    throw std::invalid_argument("eps_n must lie in (0, 1] for sup truncation, got " +
                                format_double(eps_n));
  double m = sup_on_grid(fn).value;
  if (!(m > 0.0))
    throw DataError("density estimate vanishes on the whole grid; sup truncation is undefined");
  double threshold = eps_n * m;
  std::vector<double> out(fn.values.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = fn.values[i] >= threshold ? fn.values[i] : threshold;
  return out;
}

PointwiseInterval interval_hat(double fstar, double fn, double kappa, double v_n, double delta)
{
  if (!(v_n > 0.0) || !std::isfinite(v_n))
    throw std::invalid_argument("v_n must be positive");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("delta must be nonnegative");
  if (!(kappa > 0.0))
    throw std::invalid_argument("kappa must be positive");
  if (!(fn >= 0.0))
    throw std::invalid_argument("variance proxy must be nonnegative");
  return { fstar, delta * std::sqrt(fn * kappa) / v_n };
}

namespace {

void check_same_grid(const DensityEstimate& a, const DensityEstimate& b)
{
  if (!a.grid || !b.grid)
    throw std::invalid_argument("estimate without grid");
  if (a.grid != b.grid && !(*a.grid == *b.grid))
    throw DimensionMismatch("estimates live on different grids");
  if (a.sample_size != b.sample_size)
    throw std::invalid_argument("estimates come from samples of different size");
}

// Variance proxy after truncation, the threshold used, and trigger flags.
struct Proxy
{
  std::vector<double> values;
  std::optional<double> threshold;
  std::vector<std::uint8_t> triggered;
};

Proxy variance_proxy(const DensityEstimate& fn, Truncation truncation, std::optional<double> eps_n)
{
  Proxy p;
  p.triggered.assign(fn.values.size(), 0);
  if (truncation == Truncation::none) {
    p.values = fn.values;
    return p;
  }
  if (!eps_n)
    throw std::invalid_argument("truncation needs eps_n");
  if (truncation == Truncation::tilde) {
    p.values = truncate_tilde(fn, *eps_n);
    p.threshold = *eps_n;
  } else {
    p.values = truncate_sup(fn, *eps_n);
    p.threshold = *eps_n * sup_on_grid(fn).value;
  }
  for (std::size_t i = 0; i < fn.values.size(); ++i)
    p.triggered[i] = fn.values[i] < *p.threshold ? 1 : 0;
  return p;
}

double log_inverse_bandwidth(double h)
{
  if (!(h > 0.0 && h < 1.0))
    throw std::domain_error("bandwidth must lie in (0, 1) so that log(1/h) > 0, got " +
                            format_double(h));
  return std::log(1.0 / h);
}

// sqrt(kappa / (n h^d)) sqrt(log(1/h)): the common part of every
// translated, simplified and truncated half-width.
double log_scale(const DensityEstimate& fn, double kappa)
{
  double d = static_cast<double>(fn.grid->dimension());
  double h = fn.bandwidth;
  double n = static_cast<double>(fn.sample_size);
  return std::sqrt(kappa / (n * std::pow(h, d))) * std::sqrt(log_inverse_bandwidth(h));
}

ConfidenceBand scaled_band(const DensityEstimate& center,
                           const DensityEstimate& fn,
                           Proxy proxy,
                           double width_factor,
                           BandFamily family,
                           Truncation truncation,
                           BandParameters params)
{
  ConfidenceBand band;
  band.grid = center.grid;
  band.intervals.resize(center.values.size());
  for (std::size_t i = 0; i < band.intervals.size(); ++i)
    band.intervals[i] = { center.values[i], width_factor * std::sqrt(proxy.values[i]) };
  band.truncation_triggered = std::move(proxy.triggered);
  band.family = family;
  band.truncation = truncation;
  params.n = fn.sample_size;
  params.h = fn.bandwidth;
  params.h_star = center.bandwidth;
  params.threshold = proxy.threshold;
  params.width_factor = width_factor;
  band.params = params;
  return band;
}

// Bickel-Rosenblatt half-width factor and the terms it is built from.
BandParameters bickel_rosenblatt_terms(const DensityEstimate& fn, const Kernel& kernel, double alpha)
{
  if (fn.grid->dimension() != 1 || kernel.dimension() != 1)
    throw std::domain_error("Bickel-Rosenblatt bands are defined for d = 1 only");
  double h = fn.bandwidth;
  double n = static_cast<double>(fn.sample_size);
  double log_inv_h = log_inverse_bandwidth(h);
  if (n < 3.0)
    throw std::domain_error("Bickel-Rosenblatt bands need n >= 3");
  double a = log_inv_h / std::log(n);
  if (!(a > 0.2 && a < 0.5))
    throw std::domain_error("h = n^-a needs a in (1/5, 1/2), got a = " + format_double(a));

  double kappa = kernel.kappa();
  BandParameters p;
  p.kappa = kappa;
  p.alpha = alpha;
  p.z_alpha = z_alpha(alpha);
  p.u_n = u_n(kernel, fn.grid->region()[0], h);
  double bracket = std::numbers::sqrt2 + *p.u_n + *p.z_alpha / (std::numbers::sqrt2 * log_inv_h);
  if (!(bracket >= 0.0))
    throw std::domain_error("Bickel-Rosenblatt bracket is negative (" + format_double(bracket) +
                            "); enlarge n or alpha");
  p.width_factor = log_scale(fn, kappa) * bracket;
  return p;
}

} // namespace

ConfidenceBand band_hat(const DensityEstimate& fstar,
                        const DensityEstimate& fn,
                        double kappa,
                        double v_n,
                        double delta,
                        Truncation truncation,
                        std::optional<double> eps_n)
{
  check_same_grid(fstar, fn);
  Proxy proxy = variance_proxy(fn, truncation, eps_n);
  ConfidenceBand band;
  band.grid = fstar.grid;
  band.intervals.reserve(fstar.values.size());
  for (std::size_t i = 0; i < fstar.values.size(); ++i)
    band.intervals.push_back(interval_hat(fstar.values[i], proxy.values[i], kappa, v_n, delta));
  band.truncation_triggered = std::move(proxy.triggered);
  band.family = truncation == Truncation::none ? BandFamily::hat : BandFamily::check;
  band.truncation = truncation;
  auto& p = band.params;
  p.n = fn.sample_size;
  p.kappa = kappa;
  p.h = fn.bandwidth;
  p.h_star = fstar.bandwidth;
  p.delta = delta;
  p.v_n = v_n;
  if (truncation != Truncation::none)
    p.eps_n = eps_n;
  p.threshold = proxy.threshold;
  p.width_factor = delta * std::sqrt(kappa) / v_n;
  return band;
}

double z_alpha(double alpha)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("alpha must lie in (0, 1), got " + format_double(alpha));
  return -std::log(-std::log1p(-alpha) / 2.0);
}

double u_n(const Kernel& kernel, Interval c, double h)
{
  if (kernel.dimension() != 1)
    throw std::domain_error("u_n is defined for d = 1 only");
  if (!(c.upper > c.lower))
    throw std::invalid_argument("region needs c1 < c2");
  double log_inv_h = log_inverse_bandwidth(h);
  double ratio = std::sqrt(kernel.deriv_sq_integral() / kernel.kappa());
  double numerator = std::log(ratio / (2.0 * std::numbers::pi)) +
                     std::log(c.length() / std::numbers::pi);
  return numerator / (std::numbers::sqrt2 * log_inv_h);
}

ConfidenceBand band_bickel_rosenblatt(const DensityEstimate& fn, const Kernel& kernel, double alpha)
{
  BandParameters p = bickel_rosenblatt_terms(fn, kernel, alpha);
  return scaled_band(fn,
                     fn,
                     variance_proxy(fn, Truncation::none, std::nullopt),
                     p.width_factor,
                     BandFamily::bickel_rosenblatt,
                     Truncation::none,
                     p);
}

ConfidenceBand band_translated(const DensityEstimate& fstar,
                               const DensityEstimate& fn,
                               const Kernel& kernel,
                               double alpha)
{
  check_same_grid(fstar, fn);
  BandParameters p = bickel_rosenblatt_terms(fn, kernel, alpha);
  return scaled_band(fstar,
                     fn,
                     variance_proxy(fn, Truncation::none, std::nullopt),
                     p.width_factor,
                     BandFamily::translated,
                     Truncation::none,
                     p);
}

ConfidenceBand band_simplified(const DensityEstimate& fstar,
                               const DensityEstimate& fn,
                               double kappa,
                               double delta)
{
  check_same_grid(fstar, fn);
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("delta must be nonnegative");
  BandParameters p;
  p.kappa = kappa;
  p.delta = delta;
  return scaled_band(fstar,
                     fn,
                     variance_proxy(fn, Truncation::none, std::nullopt),
                     delta * log_scale(fn, kappa),
                     BandFamily::simplified,
                     Truncation::none,
                     p);
}

ConfidenceBand band_truncated(const DensityEstimate& fstar,
                              const DensityEstimate& fn,
                              double kappa,
                              double eps_n,
                              Truncation truncation,
                              double delta)
{
  check_same_grid(fstar, fn);
  if (truncation == Truncation::none)
    throw std::invalid_argument("truncated bands need tilde or sup truncation");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("delta must be nonnegative");
  BandParameters p;
  p.kappa = kappa;
  p.delta = delta;
  p.eps_n = eps_n;
  return scaled_band(fstar,
                     fn,
                     variance_proxy(fn, truncation, eps_n),
                     delta * log_scale(fn, kappa),
                     BandFamily::truncated,
                     truncation,
                     p);
}

Containment band_contains(const ConfidenceBand& band, std::span<const double> truth)
{
  if (truth.size() != band.intervals.size())
    throw DimensionMismatch("truth has " + std::to_string(truth.size()) +
                            " values for a band on " + std::to_string(band.intervals.size()) +
                            " grid points");
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!band.intervals[i].contains(truth[i]))
      return { false, i };
  }
  return { true, std::nullopt };
}

void validate_band_spec(const BandSpec& spec, std::size_t dim)
{
  switch (spec.family) {
    case BandFamily::hat:
    case BandFamily::simplified:
      if (spec.truncation != Truncation::none)
        throw std::invalid_argument(std::string(to_string(spec.family)) +
                                    " bands take no truncation");
      break;
    case BandFamily::bickel_rosenblatt:
    case BandFamily::translated:
      if (spec.truncation != Truncation::none)
        throw std::invalid_argument(std::string(to_string(spec.family)) +
                                    " bands take no truncation");
      if (dim != 1)
        throw std::domain_error(std::string(to_string(spec.family)) +
                                " bands are defined for d = 1 only");
      if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw std::domain_error("alpha must lie in (0, 1)");
      return;
    case BandFamily::check:
    case BandFamily::truncated:
      if (spec.truncation == Truncation::none)
        throw std::invalid_argument(std::string(to_string(spec.family)) +
                                    " bands need tilde or sup truncation");
      break;
  }
  if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta))
    throw std::invalid_argument("delta must be nonnegative");
}

ConfidenceBand build_band(const BandSpec& spec,
                          const Kernel& kernel,
                          const ScheduleSet& schedule,
                          const DensityEstimate& fstar,
                          const DensityEstimate& fn)
{
  validate_band_spec(spec, fn.grid->dimension());
  const double n = static_cast<double>(fn.sample_size);
  const double kappa = kernel.kappa();
  switch (spec.family) {
    case BandFamily::hat:
    case BandFamily::check: {
      std::optional<double> eps;
      if (spec.truncation != Truncation::none)
        eps = rate_eval(schedule.eps, n);
      auto band = band_hat(fstar, fn, kappa, rate_eval(schedule.v, n), spec.delta, spec.truncation, eps);
      return band;
    }
    case BandFamily::bickel_rosenblatt:
      check_same_grid(fstar, fn);
      return band_bickel_rosenblatt(fn, kernel, spec.alpha);
    case BandFamily::translated:
      if (!check_translation_conditions(schedule).holds())
        throw std::domain_error("h* must satisfy n^a h* -> inf and n^(1-a) h*^4 / log n -> 0");
      return band_translated(fstar, fn, kernel, spec.alpha);
    case BandFamily::simplified:
      return band_simplified(fstar, fn, kappa, spec.delta);
    case BandFamily::truncated:
      return band_truncated(fstar, fn, kappa, rate_eval(schedule.eps, n), spec.truncation, spec.delta);
  }
  throw std::invalid_argument("unknown band family");
}

} // namespace kdeband
