#include "kdeband/errors.hpp"
#include "kdeband/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace kdeband;

namespace {

const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);

double at(const Kernel& k, std::vector<double> z)
{
  return k(z);
}

} // namespace

TEST(KernelEvaluate, EpanechnikovAtZeroAndOutsideSupport)
{
  auto k = Kernel::univariate(KernelShape::epanechnikov);
  EXPECT_DOUBLE_EQ(at(k, { 0.0 }), 0.75);
  EXPECT_EQ(at(k, { 2.0 }), 0.0);
  EXPECT_EQ(at(k, { -1.0 }), 0.0);
}

TEST(KernelEvaluate, GaussianMatchesDirectFormula)
{
  auto k = Kernel::univariate(KernelShape::gaussian);
  const double expected = std::exp(-0.5) / std::sqrt(2.0 * std::numbers::pi);
  EXPECT_NEAR(at(k, { 1.0 }), expected, 1e-15);
}

TEST(KernelEvaluate, UniformIsOneOnCenteredUnitInterval)
{
  auto k = Kernel::univariate(KernelShape::uniform);
  EXPECT_EQ(at(k, { 0.0 }), 1.0);
  EXPECT_EQ(at(k, { 0.49 }), 1.0);
  EXPECT_EQ(at(k, { 0.6 }), 0.0);
}

TEST(KernelEvaluate, ProductIsProductOfFactors)
{
  auto k = Kernel::from_id("product:gaussian,biweight");
  auto g = Kernel::univariate(KernelShape::gaussian);
  auto b = Kernel::univariate(KernelShape::biweight);
  EXPECT_NEAR(at(k, { 0.3, -0.4 }), at(g, { 0.3 }) * at(b, { -0.4 }), 1e-16);
  EXPECT_EQ(k.dimension(), 2u);
}

TEST(KernelEvaluate, DimensionMismatchThrows)
{
  auto k = Kernel::from_id("epanechnikov", 2);
  EXPECT_THROW(at(k, { 0.0 }), DimensionMismatch);
  EXPECT_THROW(at(k, { 0.0 }), std::invalid_argument);
}

TEST(KernelParse, RejectsUnknownNames)
{
  EXPECT_THROW(Kernel::from_id("triangle"), std::invalid_argument);
  EXPECT_THROW(Kernel::from_id("product:"), std::invalid_argument);
  EXPECT_THROW(Kernel::from_id("product:gaussian,gaussian", 3), std::invalid_argument);
}

TEST(KernelKappa, ClosedForms)
{
  EXPECT_NEAR(Kernel::univariate(KernelShape::uniform).kappa(), 1.0, 1e-15);
  EXPECT_NEAR(Kernel::univariate(KernelShape::epanechnikov).kappa(), 0.6, 1e-15);
  EXPECT_NEAR(Kernel::univariate(KernelShape::gaussian).kappa(), 0.5 * inv_sqrt_pi, 1e-15);
  EXPECT_NEAR(Kernel::univariate(KernelShape::biweight).kappa(), 5.0 / 7.0, 1e-15);
}

TEST(KernelKappa, AgreesWithQuadrature)
{
  for (auto shape : { KernelShape::gaussian, KernelShape::epanechnikov, KernelShape::biweight,
                      KernelShape::uniform }) {
    auto k = Kernel::univariate(shape);
    EXPECT_NEAR(k.kappa(), kappa_by_quadrature(k), 1e-8) << to_string(shape);
  }
  auto k2 = Kernel::from_id("product:gaussian,epanechnikov");
  EXPECT_NEAR(k2.kappa(), kappa_by_quadrature(k2), 1e-8);
}

TEST(KernelKappa, ProductIsMultiplicative)
{
  auto g = Kernel::univariate(KernelShape::gaussian).kappa();
  auto e = Kernel::univariate(KernelShape::epanechnikov).kappa();
  auto b = Kernel::univariate(KernelShape::biweight).kappa();
  EXPECT_NEAR(Kernel::from_id("product:gaussian,epanechnikov,biweight").kappa(), g * e * b, 1e-10);
  EXPECT_NEAR(Kernel::from_id("gaussian", 3).kappa(), g * g * g, 1e-10);
}

TEST(KernelDerivative, ClosedForms)
{
  EXPECT_NEAR(Kernel::univariate(KernelShape::epanechnikov).deriv_sq_integral(), 1.5, 1e-15);
  EXPECT_NEAR(Kernel::univariate(KernelShape::gaussian).deriv_sq_integral(), 0.25 * inv_sqrt_pi, 1e-15);
}

TEST(KernelDerivative, DerivativeByQuadrature)
{
  // K'(u) = -4 * (15/16) u (1 - u^2) for the biweight.
  auto fn = [](std::span<const double> u) {
    double d = -3.75 * u[0] * (1.0 - u[0] * u[0]);
    return d * d;
  };
  double expected = integrate_box(fn, { { -1.0, 1.0 } });
  EXPECT_NEAR(Kernel::univariate(KernelShape::biweight).deriv_sq_integral(), expected, 1e-10);
}

TEST(KernelDerivative, ErrorsWhereUndefined)
{
  EXPECT_THROW(Kernel::univariate(KernelShape::uniform).deriv_sq_integral(), std::domain_error);
  EXPECT_THROW(Kernel::from_id("gaussian", 2).deriv_sq_integral(), std::domain_error);
}

TEST(KernelA1, BuiltinsPass)
{
  for (auto shape : { KernelShape::gaussian, KernelShape::epanechnikov, KernelShape::biweight,
                      KernelShape::uniform }) {
    auto report = validate_a1(Kernel::univariate(shape));
    EXPECT_TRUE(report.all_pass()) << to_string(shape);
  }
  auto report = validate_a1(Kernel::from_id("gaussian", 2));
  EXPECT_TRUE(report.all_pass());
  // nonnegative, integral, two first moments, second moment
  EXPECT_EQ(report.clauses.size(), 5u);
}

TEST(KernelA1, ImproperlyNormalizedKernelFails)
{
  auto k = Kernel::custom("ramp", { { 0.0, 1.0 } }, [](std::span<const double> u) {
    return (u[0] >= 0.0 && u[0] <= 1.0) ? u[0] : 0.0;
  });
  auto report = validate_a1(k);
  EXPECT_FALSE(report.all_pass());
  bool found = false;
  for (const auto& c : report.clauses) {
    if (c.name == "integral_one") {
      found = true;
      EXPECT_NEAR(c.value, 0.5, 1e-12);
      EXPECT_FALSE(c.pass);
    }
  }
  EXPECT_TRUE(found);
}

TEST(KernelA1, NegativeKernelFailsNonnegativity)
{
  auto k = Kernel::custom("signed", { { -1.0, 1.0 } }, [](std::span<const double> u) {
    return 0.5 + 0.5 * std::sin(3.0 * u[0]) - 0.25;
  });
  auto report = validate_a1(k);
  EXPECT_FALSE(report.clauses.front().pass);
}

TEST(KernelCustom, KappaByQuadrature)
{
  auto k = Kernel::custom("tri", { { -1.0, 1.0 } }, [](std::span<const double> u) {
    return std::max(0.0, 1.0 - std::abs(u[0]));
  });
  EXPECT_NEAR(k.kappa(), 2.0 / 3.0, 1e-10);
  EXPECT_TRUE(validate_a1(k).all_pass());
}

TEST(KernelMetadata, SupportAndHolder)
{
  EXPECT_FALSE(Kernel::univariate(KernelShape::gaussian).support_radius().has_value());
  EXPECT_NEAR(*Kernel::univariate(KernelShape::epanechnikov).support_radius(), 1.0, 0.0);
  EXPECT_NEAR(*Kernel::from_id("epanechnikov", 2).support_radius(), std::sqrt(2.0), 1e-15);
  auto k = Kernel::custom(
    "declared", { { -1.0, 1.0 } }, [](std::span<const double>) { return 0.5; }, 1.0, 2.0, true);
  EXPECT_EQ(*k.holder_exponent(), 1.0);
  EXPECT_EQ(*k.holder_constant(), 2.0);
  EXPECT_TRUE(k.covering_number_condition());
}

TEST(Quadrature, IntegratesPolynomialExactly)
{
  auto fn = [](std::span<const double> z) { return z[0] * z[0] * z[1]; };
  EXPECT_NEAR(integrate_box(fn, { { 0.0, 1.0 }, { 0.0, 2.0 } }), 2.0 / 3.0, 1e-12);
}
