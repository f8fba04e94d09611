#include "kdeband/kernels.hpp"
#include "kdeband/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kdeband {

namespace {

constexpr double inv_sqrt_2pi = 0.39894228040143267794;
// Gaussian axes are integrated over [-8, 8]; the neglected mass is ~1e-15.
constexpr double gaussian_half_range = 8.0;

double shape_value(KernelShape shape, double u)
{
  switch (shape) {
    case KernelShape::gaussian:
      return inv_sqrt_2pi * std::exp(-0.5 * u * u);
    case KernelShape::epanechnikov:
      return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case KernelShape::biweight: {
      if (std::abs(u) > 1.0)
        return 0.0;
      double t = 1.0 - u * u;
      return 0.9375 * t * t;
    }
    case KernelShape::uniform:
      return std::abs(u) <= 0.5 ? 1.0 : 0.0;
  }
  return 0.0;
}

double shape_radius(KernelShape shape)
{
  switch (shape) {
    case KernelShape::gaussian:
      return gaussian_half_range;
    case KernelShape::uniform:
      return 0.5;
    default:
      return 1.0;
  }
}

double shape_kappa(KernelShape shape)
{
  switch (shape) {
    case KernelShape::gaussian:
      return 0.5 / std::sqrt(std::numbers::pi);
    case KernelShape::epanechnikov:
      return 0.6;
    case KernelShape::biweight:
      return 5.0 / 7.0;
    case KernelShape::uniform:
      return 1.0;
  }
  return 0.0;
}

double shape_sup(KernelShape shape)
{
  switch (shape) {
    case KernelShape::gaussian:
      return inv_sqrt_2pi;
    case KernelShape::epanechnikov:
      return 0.75;
    case KernelShape::biweight:
      return 0.9375;
    case KernelShape::uniform:
      return 1.0;
  }
  return 0.0;
}

// Lipschitz constant sup|K'|; the uniform kernel is not continuous.
std::optional<double> shape_lipschitz(KernelShape shape)
{
  switch (shape) {
    case KernelShape::gaussian:
      return inv_sqrt_2pi * std::exp(-0.5);
    case KernelShape::epanechnikov:
      return 1.5;
    case KernelShape::biweight:
      return 5.0 / (2.0 * std::sqrt(3.0));
    case KernelShape::uniform:
      return std::nullopt;
  }
  return std::nullopt;
}

double integrate_axis(const std::function<double(std::span<const double>)>& fn,
                      const std::vector<Interval>& box,
                      std::vector<double>& point,
                      std::size_t axis,
                      double abs_tolerance)
{
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [&](double t) {
    point[axis] = t;
    if (axis + 1 == box.size())
      return fn(point);
    return integrate_axis(fn, box, point, axis + 1, abs_tolerance);
  };
  double error = 0.0;
  double value = gauss_kronrod<double, 61>::integrate(
    integrand, box[axis].lower, box[axis].upper, 12, 1e-14, &error);
  if (!std::isfinite(value) || error > abs_tolerance) {
    throw std::runtime_error("quadrature did not converge (error estimate " +
                             std::to_string(error) + ")");
  }
  return value;
}

} // namespace

std::string_view to_string(KernelShape shape)
{
  switch (shape) {
    case KernelShape::gaussian:
      return "gaussian";
    case KernelShape::epanechnikov:
      return "epanechnikov";
    case KernelShape::biweight:
      return "biweight";
    case KernelShape::uniform:
      return "uniform";
  }
  return "unknown";
}

KernelShape parse_kernel_shape(std::string_view name)
{
  for (auto shape : { KernelShape::gaussian,
                      KernelShape::epanechnikov,
                      KernelShape::biweight,
                      KernelShape::uniform }) {
    if (name == to_string(shape))
      return shape;
  }
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

Kernel Kernel::univariate(KernelShape shape)
{
  return product({ shape });
}

Kernel Kernel::product(std::vector<KernelShape> shapes)
{
  if (shapes.empty())
    throw std::invalid_argument("product kernel needs at least one factor");
  Kernel k;
  k.dim_ = shapes.size();
  k.shapes_ = std::move(shapes);
  k.compact_ = true;
  k.covering_ = true;
  k.holder_exponent_ = 1.0;
  double lipschitz = 0.0;
  for (std::size_t i = 0; i < k.dim_; ++i) {
    auto s = k.shapes_[i];
    double r = shape_radius(s);
    k.box_.push_back({ -r, r });
    if (s == KernelShape::gaussian)
      k.compact_ = false;
    auto li = shape_lipschitz(s);
    if (!li) {
      k.holder_exponent_.reset();
      continue;
    }
    double others = 1.0;
    for (std::size_t j = 0; j < k.dim_; ++j) {
      if (j != i)
        others *= shape_sup(k.shapes_[j]);
    }
    lipschitz += *li * others;
  }
  if (k.holder_exponent_)
    k.holder_constant_ = lipschitz;

  if (k.dim_ == 1) {
    k.id_ = std::string(to_string(k.shapes_[0]));
  } else {
    k.id_ = "product:";
    for (std::size_t i = 0; i < k.dim_; ++i) {
      if (i > 0)
        k.id_ += ",";
      k.id_ += to_string(k.shapes_[i]);
    }
  }
  return k;
}

Kernel Kernel::from_id(std::string_view id, std::size_t dim)
{
  constexpr std::string_view prefix = "product:";
  std::vector<KernelShape> shapes;
  if (id.substr(0, prefix.size()) == prefix) {
    auto rest = id.substr(prefix.size());
    while (!rest.empty()) {
      auto comma = rest.find(',');
      shapes.push_back(parse_kernel_shape(rest.substr(0, comma)));
      if (comma == std::string_view::npos)
        break;
      rest = rest.substr(comma + 1);
    }
    if (shapes.empty())
      throw std::invalid_argument("empty product kernel '" + std::string(id) + "'");
  } else {
    auto shape = parse_kernel_shape(id);
    shapes.assign(dim == 0 ? 1 : dim, shape);
  }
  if (dim != 0 && shapes.size() != dim) {
    throw std::invalid_argument("kernel '" + std::string(id) + "' has dimension " +
                                std::to_string(shapes.size()) + ", expected " +
                                std::to_string(dim));
  }
  return product(std::move(shapes));
}

Kernel Kernel::custom(std::string name,
                      std::vector<Interval> box,
                      Function fn,
                      std::optional<double> holder_exponent,
                      std::optional<double> holder_constant,
                      bool covering_number_condition)
{
  if (box.empty())
    throw std::invalid_argument("custom kernel needs a non-empty box");
  for (const auto& iv : box) {
    if (!(iv.upper > iv.lower) || !std::isfinite(iv.lower) || !std::isfinite(iv.upper))
      throw std::invalid_argument("custom kernel box must be bounded and non-degenerate");
  }
  if (!fn)
    throw std::invalid_argument("custom kernel needs a function");
  Kernel k;
  k.id_ = std::move(name);
  k.dim_ = box.size();
  k.box_ = std::move(box);
  k.compact_ = true;
  k.custom_ = true;
  k.fn_ = std::move(fn);
  k.holder_exponent_ = holder_exponent;
  k.holder_constant_ = holder_constant;
  k.covering_ = covering_number_condition;
  return k;
}

double Kernel::operator()(std::span<const double> z) const
{
  if (z.size() != dim_) {
    throw DimensionMismatch("point has dimension " + std::to_string(z.size()) +
                                ", kernel has dimension " + std::to_string(dim_));
  }
  return evaluate_unchecked(z.data());
}

double Kernel::evaluate_unchecked(const double* z) const
{
  if (custom_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!box_[i].contains(z[i]))
        return 0.0;
    }
    return fn_(std::span<const double>(z, dim_));
  }
  double value = 1.0;
  for (std::size_t i = 0; i < dim_ && value != 0.0; ++i)
    value *= shape_value(shapes_[i], z[i]);
  return value;
}

std::optional<double> Kernel::support_radius() const
{
  if (!compact_)
    return std::nullopt;
  double r2 = 0.0;
  for (const auto& iv : box_) {
    double r = std::max(std::abs(iv.lower), std::abs(iv.upper));
    r2 += r * r;
  }
  return std::sqrt(r2);
}

double Kernel::kappa() const
{
  if (custom_)
    return kappa_by_quadrature(*this);
  double value = 1.0;
  for (auto s : shapes_)
    value *= shape_kappa(s);
  return value;
}

double Kernel::deriv_sq_integral() const
{
  if (dim_ != 1)
    throw std::domain_error("int K'^2 is only defined for univariate kernels");
  if (custom_)
    throw std::domain_error("int K'^2 is not available for custom kernel '" + id_ + "'");
  switch (shapes_[0]) {
    case KernelShape::gaussian:
      return 0.25 / std::sqrt(std::numbers::pi);
    case KernelShape::epanechnikov:
      return 1.5;
    case KernelShape::biweight:
      return 15.0 / 7.0;
    case KernelShape::uniform:
      break;
  }
  throw std::domain_error("the uniform kernel has no square-integrable derivative");
}

double integrate_box(const std::function<double(std::span<const double>)>& fn,
                     const std::vector<Interval>& box,
                     double abs_tolerance)
{
  if (box.empty())
    throw std::invalid_argument("integration box is empty");
  std::vector<double> point(box.size(), 0.0);
  return integrate_axis(fn, box, point, 0, abs_tolerance);
}

double kappa_by_quadrature(const Kernel& kernel, double abs_tolerance)
{
  return integrate_box(
    [&](std::span<const double> z) {
      double k = kernel.evaluate_unchecked(z.data());
      return k * k;
    },
    kernel.integration_box(),
    abs_tolerance);
}

bool A1Report::all_pass() const
{
  return std::all_of(clauses.begin(), clauses.end(), [](const A1Clause& c) { return c.pass; });
}

A1Report validate_a1(const Kernel& kernel, double tolerance)
{
  A1Report report;
  const auto& box = kernel.integration_box();
  const std::size_t d = kernel.dimension();

  auto integrate_or_nan = [&](const std::function<double(std::span<const double>)>& fn) {
    try {
      return integrate_box(fn, box, tolerance * 1e-2);
    } catch (const std::runtime_error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  // Nonnegativity on a lattice over the integration box.
  {
    const std::size_t per_axis = d == 1 ? 2001 : (d == 2 ? 201 : 21);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> z(d);
    double min_value = std::numeric_limits<double>::infinity();
    bool done = false;
    while (!done) {
      for (std::size_t i = 0; i < d; ++i) {
        z[i] = box[i].lower + box[i].length() * static_cast<double>(idx[i]) /
                                static_cast<double>(per_axis - 1);
      }
      min_value = std::min(min_value, kernel.evaluate_unchecked(z.data()));
      std::size_t axis = d;
      while (axis > 0) {
        --axis;
        if (++idx[axis] < per_axis)
          break;
        idx[axis] = 0;
        if (axis == 0)
          done = true;
      }
    }
    report.clauses.push_back({ "nonnegative", min_value, 0.0, min_value >= 0.0 });
  }

  double mass = integrate_or_nan([&](std::span<const double> z) {
    return kernel.evaluate_unchecked(z.data());
  });
  report.clauses.push_back({ "integral_one", mass, 1.0, std::abs(mass - 1.0) <= tolerance });

  for (std::size_t j = 0; j < d; ++j) {
    double m1 = integrate_or_nan([&](std::span<const double> z) {
      return z[j] * kernel.evaluate_unchecked(z.data());
    });
    report.clauses.push_back(
      { "first_moment_" + std::to_string(j + 1), m1, 0.0, std::abs(m1) <= tolerance });
  }

  double m2 = integrate_or_nan([&](std::span<const double> z) {
    double r2 = 0.0;
    for (double zi : z)
      r2 += zi * zi;
    return r2 * std::abs(kernel.evaluate_unchecked(z.data()));
  });
  report.clauses.push_back({ "second_moment_finite",
                             m2,
                             std::numeric_limits<double>::infinity(),
                             std::isfinite(m2) });
  return report;
}

} // namespace kdeband
