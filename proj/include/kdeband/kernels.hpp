#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kdeband {

//! One-dimensional kernel shapes shipped with the library.
enum class KernelShape
{
  gaussian,
  epanechnikov,
  biweight,
  uniform
};

std::string_view to_string(KernelShape shape);
KernelShape parse_kernel_shape(std::string_view name);

//! Closed interval [lower, upper].
struct Interval
{
  double lower;
  double upper;

  double length() const { return upper - lower; }
  bool contains(double x) const { return x >= lower && x <= upper; }
};

//! A density kernel on R^d together with the constants the band formulas
//! need (kappa = int K^2, int K'^2) and the Holder / covering metadata of
//! Holder / covering assumption.
//!
//! Built-in kernels are a single univariate shape or a product of shapes,
//! K(z) = prod_i K_i(z_i). Custom kernels wrap an arbitrary callable and
//! a bounded integration box; their constants are obtained by quadrature.
class Kernel
{
public:
  using Function = std::function<double(std::span<const double>)>;

  //! Parses "gaussian", "epanechnikov", "biweight", "uniform" or
  //! "product:<k1>,<k2>,...". When `dim` > 1 and `id` names a single shape,
  //! the d-fold product of that shape is returned. `dim` = 0 keeps the
  //! natural dimension of the identifier.
  static Kernel from_id(std::string_view id, std::size_t dim = 0);
  static Kernel univariate(KernelShape shape);
  static Kernel product(std::vector<KernelShape> shapes);

  //! Kernel given by an arbitrary function. `box` must contain the support;
  //! it is also the integration domain for every quadrature.
  static Kernel custom(std::string name,
                       std::vector<Interval> box,
                       Function fn,
                       std::optional<double> holder_exponent = std::nullopt,
                       std::optional<double> holder_constant = std::nullopt,
                       bool covering_number_condition = false);

  const std::string& id() const { return id_; }
  std::size_t dimension() const { return dim_; }
  bool is_builtin() const { return !custom_; }
  std::span<const KernelShape> factors() const { return shapes_; }

  //! K(z). Throws std::invalid_argument on dimension mismatch.
  double operator()(std::span<const double> z) const;
  double evaluate(std::span<const double> z) const { return (*this)(z); }

  //! K(z) without the dimension check; `z` points at `dimension()` values.
  double evaluate_unchecked(const double* z) const;

  //! Euclidean radius of the support, or nullopt for unbounded kernels.
  std::optional<double> support_radius() const;
  //! Per-axis box that contains the support (Gaussian axes use [-8, 8]).
  const std::vector<Interval>& integration_box() const { return box_; }
  bool compact_support() const { return compact_; }

  //! int K^2, closed form for built-ins and quadrature otherwise.
  double kappa() const;
  //! int K'^2 for d = 1; throws std::domain_error for d > 1 or kernels
  //! without a square-integrable derivative.
  double deriv_sq_integral() const;

  std::optional<double> holder_exponent() const { return holder_exponent_; }
  std::optional<double> holder_constant() const { return holder_constant_; }
  //! Declared, never computed.
  bool covering_number_condition() const { return covering_; }

private:
  Kernel() = default;

  std::string id_;
  std::size_t dim_{ 0 };
  std::vector<KernelShape> shapes_;
  std::vector<Interval> box_;
  bool compact_{ true };
  bool custom_{ false };
  Function fn_;
  std::optional<double> holder_exponent_;
  std::optional<double> holder_constant_;
  bool covering_{ false };
};

//! Adaptive Gauss-Kronrod integration of `fn` over a box, nested axis by
//! axis. Throws std::runtime_error if the error estimate exceeds
//! `abs_tolerance` (scaled by the number of axes).
double integrate_box(const std::function<double(std::span<const double>)>& fn,
                     const std::vector<Interval>& box,
                     double abs_tolerance = 1e-10);

//! int K^2 by quadrature, independent of the closed forms.
double kappa_by_quadrature(const Kernel& kernel, double abs_tolerance = 1e-10);

struct A1Clause
{
  std::string name;
  double value;
  double target;
  bool pass;
};

//! Outcome of checking the kernel moment assumptions by quadrature. Failures are reported, not
//! thrown.
struct A1Report
{
  std::vector<A1Clause> clauses;
  bool all_pass() const;
};

A1Report validate_a1(const Kernel& kernel, double tolerance = 1e-8);

} // namespace kdeband
