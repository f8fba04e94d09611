#pragma once

#include "kdeband/estimator.hpp"
#include "kdeband/kernels.hpp"
#include "kdeband/schedules.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace kdeband {

enum class Truncation
{
  none,
  tilde, //!< floor eps_n
  sup    //!< floor eps_n * sup_C f_n
};

enum class BandFamily
{
  hat,               //!< f*_n +- delta sqrt(f_n kappa) / v_n
  check,             //!< as hat with f_n replaced by a truncation
  bickel_rosenblatt, //!< B_{n,alpha}, centered at f_n
  translated,        //!< B*, B_{n,alpha} widths centered at f*_n
  simplified,        //!< B**, sqrt(2) bracket only
  truncated          //!< B***, B** with the variance proxy truncated
};

std::string_view to_string(Truncation t);
std::string_view to_string(BandFamily f);
Truncation parse_truncation(std::string_view name);
BandFamily parse_band_family(std::string_view name);

struct PointwiseInterval
{
  double center;
  double half_width;

  double lower() const { return center - half_width; }
  double upper() const { return center + half_width; }
  bool contains(double y) const { return y >= lower() && y <= upper(); }
};

//! Construction metadata recorded with every band. Absent fields do not
//! apply to the family.
struct BandParameters
{
  std::size_t n{ 0 };
  double kappa{ 0.0 };
  double h{ 0.0 };
  double h_star{ 0.0 };
  std::optional<double> delta;
  std::optional<double> alpha;
  std::optional<double> v_n;
  std::optional<double> eps_n;
  //! eps_n (tilde) or eps_n * sup f_n (sup).
  std::optional<double> threshold;
  std::optional<double> z_alpha;
  std::optional<double> u_n;
  //! Factor multiplying sqrt(T(x)) in every half-width.
  double width_factor{ 0.0 };
};

struct ConfidenceBand
{
  std::shared_ptr<const EvaluationGrid> grid;
  std::vector<PointwiseInterval> intervals;
  //! 1 where the truncation replaced f_n(x).
  std::vector<std::uint8_t> truncation_triggered;
  BandFamily family;
  Truncation truncation;
  BandParameters params;
};

//! max(f_n(x), eps_n); f_n(x) = eps_n keeps f_n(x).
std::vector<double> truncate_tilde(const DensityEstimate& fn, double eps_n);
//! max(f_n(x), eps_n M) with M = sup_on_grid(f_n). Needs 0 < eps_n <= 1
//! and M > 0 (DataError otherwise).
std::vector<double> truncate_sup(const DensityEstimate& fn, double eps_n);

//! [fstar -+ delta sqrt(fn kappa) / v_n].
PointwiseInterval interval_hat(double fstar, double fn, double kappa, double v_n, double delta);

//! B-hat (truncation none) or B-check (tilde / sup).
ConfidenceBand band_hat(const DensityEstimate& fstar,
                        const DensityEstimate& fn,
                        double kappa,
                        double v_n,
                        double delta,
                        Truncation truncation = Truncation::none,
                        std::optional<double> eps_n = std::nullopt);

//! z such that exp(-2 exp(-z)) = 1 - alpha.
double z_alpha(double alpha);

//! Centering term of the Bickel-Rosenblatt bracket for C = [c1, c2].
double u_n(const Kernel& kernel, Interval c, double h);

//! B_{n,alpha}; h = n^{-a} with a in (1/5, 1/2) is checked from the
//! estimate's bandwidth and sample size. Region C is the grid's box.
ConfidenceBand band_bickel_rosenblatt(const DensityEstimate& fn,
                                      const Kernel& kernel,
                                      double alpha);

//! B*: B_{n,alpha} half-widths around f*_n.
ConfidenceBand band_translated(const DensityEstimate& fstar,
                               const DensityEstimate& fn,
                               const Kernel& kernel,
                               double alpha);

//! B**: half-width delta sqrt(f_n kappa / (n h^d)) sqrt(log(1/h)), delta
//! defaulting to sqrt(2).
ConfidenceBand band_simplified(const DensityEstimate& fstar,
                               const DensityEstimate& fn,
                               double kappa,
                               double delta = 1.4142135623730951);

//! B***: B** with f_n replaced by its truncation.
ConfidenceBand band_truncated(const DensityEstimate& fstar,
                              const DensityEstimate& fn,
                              double kappa,
                              double eps_n,
                              Truncation truncation,
                              double delta = 1.4142135623730951);

struct Containment
{
  bool contained;
  std::optional<std::size_t> first_violation;
};

//! Closed-interval test at every grid point, in grid order.
Containment band_contains(const ConfidenceBand& band, std::span<const double> truth);

//! Family, truncation, delta / alpha. Which of delta and alpha applies is
//! fixed by the family.
struct BandSpec
{
  BandFamily family{ BandFamily::truncated };
  Truncation truncation{ Truncation::sup };
  double delta{ 1.4142135623730951 };
  double alpha{ 0.05 };
};

//! Rejects truncation modes the family does not take.
void validate_band_spec(const BandSpec& spec, std::size_t dim);

//! Builds the band `spec` describes from both estimates and the schedule
//! evaluated at the estimates' sample size.
ConfidenceBand build_band(const BandSpec& spec,
                          const Kernel& kernel,
                          const ScheduleSet& schedule,
                          const DensityEstimate& fstar,
                          const DensityEstimate& fn);

} // namespace kdeband
