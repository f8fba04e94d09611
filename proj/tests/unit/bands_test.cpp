#include "kdeband/bands.hpp"
#include "kdeband/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

using namespace kdeband;

namespace {

const double sqrt2 = std::numbers::sqrt2;

std::shared_ptr<const EvaluationGrid> grid1(double lo, double hi, double step)
{
  return std::make_shared<const EvaluationGrid>(std::vector<Interval>{ { lo, hi } },
                                                std::vector<double>{ step });
}

DensityEstimate estimate(std::shared_ptr<const EvaluationGrid> g,
                         std::vector<double> values,
                         double h,
                         std::size_t n)
{
  return { std::move(g), std::move(values), h, n, "epanechnikov" };
}

std::vector<double> values_of(const std::vector<PointwiseInterval>& v,
                              double (*get)(const PointwiseInterval&))
{
  std::vector<double> out;
  for (const auto& i : v)
    out.push_back(get(i));
  return out;
}

double half_width(const PointwiseInterval& i)
{
  return i.half_width;
}

} // namespace

TEST(TruncateTilde, Examples)
{
  auto g = grid1(0.0, 1.0, 0.5);
  auto t = truncate_tilde(estimate(g, { 0.5, 0.0, 0.1 }, 0.5, 10), 0.1);
  EXPECT_EQ(t, (std::vector<double>{ 0.5, 0.1, 0.1 }));
}

TEST(TruncateSup, Examples)
{
  auto g = grid1(0.0, 1.0, 0.5);
  auto fn = estimate(g, { 0.8, 2.0, 1.3 }, 0.5, 10);
  auto t = truncate_sup(fn, 0.5);
  EXPECT_EQ(t, (std::vector<double>{ 1.0, 2.0, 1.3 }));
  EXPECT_EQ(truncate_sup(fn, 1.0), (std::vector<double>{ 2.0, 2.0, 2.0 }));
}

TEST(TruncateSup, Errors)
{
  auto g = grid1(0.0, 1.0, 0.5);
  EXPECT_THROW(truncate_sup(estimate(g, { 0.0, 0.0, 0.0 }, 0.5, 10), 0.5), DataError);
  EXPECT_THROW(truncate_sup(estimate(g, { 1.0, 0.0, 0.0 }, 0.5, 10), 1.5), std::invalid_argument);
  EXPECT_THROW(truncate_tilde(estimate(g, { 1.0, 0.0, 0.0 }, 0.5, 10), 0.0), std::invalid_argument);
}

TEST(IntervalHat, ArithmeticOracle)
{
  auto iv = interval_hat(0.4, 0.36, 0.6, 10.0, 2.0);
  const double hw = 2.0 * std::sqrt(0.36 * 0.6) / 10.0;
  EXPECT_DOUBLE_EQ(iv.half_width, hw);
  EXPECT_NEAR(iv.half_width, 0.0929516, 1e-7);
  EXPECT_NEAR(iv.lower(), 0.307048, 1e-6);
  EXPECT_NEAR(iv.upper(), 0.492952, 1e-6);
}

TEST(IntervalHat, DegenerateCases)
{
  auto zero_delta = interval_hat(0.4, 0.36, 0.6, 10.0, 0.0);
  EXPECT_EQ(zero_delta.half_width, 0.0);
  EXPECT_EQ(zero_delta.lower(), 0.4);
  EXPECT_EQ(interval_hat(0.4, 0.0, 0.6, 10.0, 2.0).half_width, 0.0);
  EXPECT_THROW(interval_hat(0.4, 0.36, 0.6, 0.0, 2.0), std::invalid_argument);
  EXPECT_THROW(interval_hat(0.4, 0.36, 0.6, 10.0, -1.0), std::invalid_argument);
}

TEST(BandHat, PerPointOracle)
{
  auto g = grid1(-1.0, 1.0, 1.0);
  auto fstar = estimate(g, { 0.2, 0.4, 0.25 }, 0.4, 100);
  auto fn = estimate(g, { 0.18, 0.45, 0.3 }, 0.3, 100);
  auto band = band_hat(fstar, fn, 0.6, 7.0, 1.5);
  ASSERT_EQ(band.intervals.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    auto ref = interval_hat(fstar.values[i], fn.values[i], 0.6, 7.0, 1.5);
    EXPECT_EQ(band.intervals[i].center, ref.center);
    EXPECT_EQ(band.intervals[i].half_width, ref.half_width);
  }
  EXPECT_EQ(band.family, BandFamily::hat);
}

TEST(BandHat, TildeWithoutTriggerEqualsPlain)
{
  auto g = grid1(-1.0, 1.0, 1.0);
  auto fstar = estimate(g, { 0.2, 0.4, 0.25 }, 0.4, 100);
  auto fn = estimate(g, { 0.18, 0.45, 0.3 }, 0.3, 100);
  auto plain = band_hat(fstar, fn, 0.6, 7.0, 1.5);
  auto checked = band_hat(fstar, fn, 0.6, 7.0, 1.5, Truncation::tilde, 0.1);
  EXPECT_EQ(checked.family, BandFamily::check);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(plain.intervals[i].half_width, checked.intervals[i].half_width);
    EXPECT_EQ(checked.truncation_triggered[i], 0);
  }
}

TEST(BandHat, RejectsMismatchedEstimates)
{
  auto fstar = estimate(grid1(-1.0, 1.0, 1.0), { 0.2, 0.4, 0.25 }, 0.4, 100);
  auto fn = estimate(grid1(-1.0, 1.0, 0.5), { 0.2, 0.4, 0.25, 0.1, 0.1 }, 0.3, 100);
  EXPECT_THROW(band_hat(fstar, fn, 0.6, 7.0, 1.5), DimensionMismatch);
}

TEST(ZAlpha, ClosedFormAndRoundTrip)
{
  EXPECT_EQ(z_alpha(1.0 - std::exp(-2.0)), 0.0);
  EXPECT_NEAR(z_alpha(0.05), -std::log(-std::log(0.95) / 2.0), 1e-14);
  EXPECT_NEAR(z_alpha(0.05), 3.6633424296, 1e-9);
  for (double a : { 0.01, 0.05, 0.1, 0.5 })
    EXPECT_NEAR(std::exp(-2.0 * std::exp(-z_alpha(a))), 1.0 - a, 1e-12);
}

TEST(ZAlpha, IncreasesAsAlphaShrinks)
{
  double prev = z_alpha(0.9);
  for (double a : { 0.5, 0.1, 0.01, 1e-4, 1e-8 }) {
    double z = z_alpha(a);
    EXPECT_GT(z, prev);
    prev = z;
  }
  EXPECT_THROW(z_alpha(0.0), std::domain_error);
  EXPECT_THROW(z_alpha(1.0), std::domain_error);
}

TEST(UN, ArithmeticOracle)
{
  auto k = Kernel::univariate(KernelShape::epanechnikov);
  const double h = std::pow(1000.0, -0.3);
  const double log_inv_h = 0.3 * std::log(1000.0);
  EXPECT_NEAR(log_inv_h, 2.07233, 1e-5);
  const double expected = (std::log(std::sqrt(2.5) / (2 * std::numbers::pi)) +
                           std::log(1.0 / std::numbers::pi)) /
                          (sqrt2 * log_inv_h);
  EXPECT_NEAR(u_n(k, { 0.0, 1.0 }, h), expected, 1e-13);
  EXPECT_NEAR(u_n(k, { 0.0, 1.0 }, h), -0.86138, 1e-5);
}

TEST(UN, CancellingRegion)
{
  // (1/2pi) sqrt(int K'^2 / kappa) = pi / (c2 - c1) for c2 - c1 = 2 pi^2 / sqrt(2.5).
  auto k = Kernel::univariate(KernelShape::epanechnikov);
  const double len = 2.0 * std::numbers::pi * std::numbers::pi / std::sqrt(2.5);
  EXPECT_NEAR(u_n(k, { 0.0, len }, 0.1), 0.0, 1e-15);
}

TEST(UN, VanishesAsBandwidthShrinks)
{
  auto k = Kernel::univariate(KernelShape::gaussian);
  const double first = std::abs(u_n(k, { -1.0, 1.0 }, 0.1));
  double prev = first;
  for (double h : { 1e-2, 1e-4, 1e-8, 1e-16 }) {
    double u = std::abs(u_n(k, { -1.0, 1.0 }, h));
    EXPECT_LT(u, prev);
    prev = u;
  }
  // The decay is only logarithmic in 1/h.
  EXPECT_LT(prev, 0.5 * first);
}

namespace {

struct BrSetup
{
  Kernel kernel = Kernel::univariate(KernelShape::epanechnikov);
  std::size_t n = 5000;
  double h = std::pow(5000.0, -0.3);
  std::shared_ptr<const EvaluationGrid> grid = grid1(-1.0, 1.0, 0.25);
  DensityEstimate fn = estimate(grid, { 0.0, 0.1, 0.2, 0.3, 0.4, 0.3, 0.2, 0.1, 0.0 }, h, n);
};

} // namespace

TEST(BandBickelRosenblatt, CompositionOracle)
{
  BrSetup s;
  auto band = band_bickel_rosenblatt(s.fn, s.kernel, 0.05);
  const double L = std::log(1.0 / s.h);
  const double z = z_alpha(0.05);
  const double u = u_n(s.kernel, { -1.0, 1.0 }, s.h);
  const double bracket = sqrt2 + u + z / (sqrt2 * L);
  for (std::size_t i = 0; i < s.fn.values.size(); ++i) {
    const double expected = std::sqrt(s.fn.values[i] * 0.6 / (s.n * s.h)) * std::sqrt(L) * bracket;
    EXPECT_NEAR(band.intervals[i].half_width, expected, 1e-15);
    EXPECT_EQ(band.intervals[i].center, s.fn.values[i]);
  }
  EXPECT_EQ(*band.params.z_alpha, z);
  EXPECT_EQ(*band.params.u_n, u);
}

TEST(BandBickelRosenblatt, CancelledBracketIsSimplifiedWidth)
{
  BrSetup s;
  const double len = 2.0 * std::numbers::pi * std::numbers::pi / std::sqrt(2.5);
  auto g = grid1(0.0, len, len / 4);
  auto fn = estimate(g, { 0.1, 0.2, 0.3, 0.2, 0.1 }, s.h, s.n);
  auto br = band_bickel_rosenblatt(fn, s.kernel, 1.0 - std::exp(-2.0));
  auto simple = band_simplified(fn, fn, 0.6);
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_NEAR(br.intervals[i].half_width, simple.intervals[i].half_width, 1e-15);
}

TEST(BandBickelRosenblatt, SmallerAlphaWidens)
{
  BrSetup s;
  auto wide = band_bickel_rosenblatt(s.fn, s.kernel, 0.01);
  auto narrow = band_bickel_rosenblatt(s.fn, s.kernel, 0.2);
  for (std::size_t i = 0; i < s.fn.values.size(); ++i) {
    EXPECT_GE(wide.intervals[i].half_width, narrow.intervals[i].half_width);
    if (s.fn.values[i] > 0)
      EXPECT_GT(wide.intervals[i].half_width, narrow.intervals[i].half_width);
  }
}

TEST(BandBickelRosenblatt, Preconditions)
{
  BrSetup s;
  auto bad_a = s.fn;
  bad_a.bandwidth = std::pow(5000.0, -0.1);
  EXPECT_THROW(band_bickel_rosenblatt(bad_a, s.kernel, 0.05), std::domain_error);
  try {
    band_bickel_rosenblatt(bad_a, s.kernel, 0.05);
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("(1/5, 1/2)"), std::string::npos);
  }
  EXPECT_THROW(band_bickel_rosenblatt(s.fn, s.kernel, 1.5), std::domain_error);
  auto g2 = std::make_shared<const EvaluationGrid>(std::vector<Interval>{ { 0, 1 }, { 0, 1 } },
                                                   std::vector<double>{ 1.0 });
  auto fn2 = estimate(g2, { 0.1, 0.1, 0.1, 0.1 }, s.h, s.n);
  EXPECT_THROW(band_bickel_rosenblatt(fn2, Kernel::from_id("epanechnikov", 2), 0.05),
               std::domain_error);
}

TEST(BandTranslated, SameWidthsShiftedCenters)
{
  BrSetup s;
  auto fstar = estimate(s.grid, { 0.01, 0.12, 0.19, 0.33, 0.38, 0.29, 0.22, 0.09, 0.02 }, 0.3, s.n);
  auto br = band_bickel_rosenblatt(s.fn, s.kernel, 0.05);
  auto translated = band_translated(fstar, s.fn, s.kernel, 0.05);
  for (std::size_t i = 0; i < s.fn.values.size(); ++i) {
    EXPECT_EQ(translated.intervals[i].half_width, br.intervals[i].half_width);
    EXPECT_EQ(translated.intervals[i].center - br.intervals[i].center,
              fstar.values[i] - s.fn.values[i]);
  }
  auto same = band_translated(s.fn, s.fn, s.kernel, 0.05);
  for (std::size_t i = 0; i < s.fn.values.size(); ++i) {
    EXPECT_EQ(same.intervals[i].center, br.intervals[i].center);
    EXPECT_EQ(same.intervals[i].half_width, br.intervals[i].half_width);
  }
}

TEST(BandSimplified, RatioToTranslatedIsBracketRatio)
{
  BrSetup s;
  auto simple = band_simplified(s.fn, s.fn, 0.6);
  auto translated = band_translated(s.fn, s.fn, s.kernel, 0.05);
  const double L = std::log(1.0 / s.h);
  const double ratio =
    sqrt2 / (sqrt2 + u_n(s.kernel, { -1.0, 1.0 }, s.h) + z_alpha(0.05) / (sqrt2 * L));
  for (std::size_t i = 0; i < s.fn.values.size(); ++i) {
    if (s.fn.values[i] == 0.0)
      continue;
    EXPECT_NEAR(simple.intervals[i].half_width / translated.intervals[i].half_width, ratio, 1e-14);
  }
}

TEST(BandSimplified, EqualsHatWithMatchingNormalisation)
{
  BrSetup s;
  auto simple = band_simplified(s.fn, s.fn, 0.6);
  const double v = std::sqrt(s.n * s.h / std::log(1.0 / s.h));
  auto hat = band_hat(s.fn, s.fn, 0.6, v, sqrt2);
  for (std::size_t i = 0; i < s.fn.values.size(); ++i)
    EXPECT_NEAR(simple.intervals[i].half_width, hat.intervals[i].half_width, 1e-15);
}

TEST(BandSimplified, ThreePointOracle)
{
  auto g = grid1(0.0, 2.0, 1.0);
  auto fstar = estimate(g, { 0.3, 0.5, 0.2 }, 0.2, 400);
  auto fn = estimate(g, { 0.25, 0.55, 0.1 }, 0.1, 400);
  auto band = band_simplified(fstar, fn, 5.0 / 7.0, 1.7);
  for (std::size_t i = 0; i < 3; ++i) {
    const double expected =
      1.7 * std::sqrt(fn.values[i] * (5.0 / 7.0) / (400 * 0.1)) * std::sqrt(std::log(10.0));
    EXPECT_NEAR(band.intervals[i].half_width, expected, 1e-15);
    EXPECT_EQ(band.intervals[i].center, fstar.values[i]);
  }
}

TEST(BandTruncated, NoTriggerEqualsSimplifiedBitForBit)
{
  auto g = grid1(0.0, 2.0, 0.5);
  auto fstar = estimate(g, { 0.3, 0.5, 0.2, 0.4, 0.35 }, 0.2, 400);
  auto fn = estimate(g, { 0.25, 0.55, 0.15, 0.41, 0.3 }, 0.1, 400);
  auto simple = band_simplified(fstar, fn, 0.6);
  for (auto trunc : { Truncation::tilde, Truncation::sup }) {
    auto t = band_truncated(fstar, fn, 0.6, 0.15, trunc);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_EQ(t.intervals[i].half_width, simple.intervals[i].half_width);
      EXPECT_EQ(t.intervals[i].center, simple.intervals[i].center);
      EXPECT_EQ(t.truncation_triggered[i], 0);
    }
  }
}

TEST(BandTruncated, TailFloor)
{
  auto g = grid1(0.0, 2.0, 0.5);
  auto fn = estimate(g, { 0.0, 0.0, 0.8, 0.6, 0.0 }, 0.1, 1000);
  auto band = band_truncated(fn, fn, 0.6, 0.2, Truncation::sup);
  const double floor_hw =
    std::sqrt(0.2 * 0.8 * 0.6 / (1000 * 0.1)) * std::sqrt(std::log(10.0)) * sqrt2;
  EXPECT_NEAR(band.intervals[0].half_width, floor_hw, 1e-15);
  EXPECT_GT(band.intervals[0].half_width, 0.0);
  EXPECT_EQ(band.truncation_triggered[0], 1);
  EXPECT_EQ(band.truncation_triggered[2], 0);
  EXPECT_NEAR(*band.params.threshold, 0.16, 1e-15);
}

TEST(BandTruncated, ProductKernelTwoDimensions)
{
  auto g = std::make_shared<const EvaluationGrid>(std::vector<Interval>{ { 0, 1 }, { 0, 1 } },
                                                  std::vector<double>{ 1.0 });
  auto fstar = estimate(g, { 0.2, 0.3, 0.1, 0.05 }, 0.3, 2000);
  auto fn = estimate(g, { 0.25, 0.35, 0.02, 0.0 }, 0.2, 2000);
  const double kappa = Kernel::from_id("epanechnikov", 2).kappa();
  auto band = band_truncated(fstar, fn, kappa, 0.05, Truncation::tilde);
  for (std::size_t i = 0; i < 4; ++i) {
    const double t = std::max(fn.values[i], 0.05);
    const double expected =
      sqrt2 * std::sqrt(t * kappa / (2000 * 0.2 * 0.2)) * std::sqrt(std::log(1 / 0.2));
    EXPECT_NEAR(band.intervals[i].half_width, expected, 1e-15);
  }
}

TEST(BandTruncated, UnitEpsGivesConstantWidth)
{
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto g = grid1(0.0, 1.0, 0.01);
  std::vector<double> v(g->size());
  for (auto& x : v)
    x = U(rng);
  auto fn = estimate(g, v, 0.1, 500);
  auto band = band_truncated(fn, fn, 0.6, 1.0, Truncation::sup);
  for (const auto& iv : band.intervals)
    EXPECT_EQ(iv.half_width, band.intervals[0].half_width);
}

TEST(BandContains, Conventions)
{
  auto g = grid1(0.0, 2.0, 1.0);
  auto fn = estimate(g, { 0.2, 0.4, 0.3 }, 0.1, 100);
  auto band = band_simplified(fn, fn, 0.6);
  std::vector<double> truth = fn.values;
  EXPECT_TRUE(band_contains(band, truth).contained);
  truth[1] = band.intervals[1].upper();
  EXPECT_TRUE(band_contains(band, truth).contained);
  truth[1] += 1e-9;
  auto c = band_contains(band, truth);
  EXPECT_FALSE(c.contained);
  EXPECT_EQ(*c.first_violation, 1u);
  std::vector<double> short_truth{ 0.2 };
  EXPECT_THROW(band_contains(band, short_truth), DimensionMismatch);
}

TEST(BandProperties, RandomizedInvariants)
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto g = grid1(-1.0, 1.0, 0.2);
  const std::size_t m = g->size();
  auto k = Kernel::univariate(KernelShape::epanechnikov);
  for (int t = 0; t < 600; ++t) {
    std::vector<double> a(m), b(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = U(rng) < 0.2 ? 0.0 : U(rng);
      b[i] = U(rng);
    }
    const std::size_t n = 500 + static_cast<std::size_t>(U(rng) * 5000);
    const double aexp = 0.21 + 0.28 * U(rng);
    const double h = std::pow(static_cast<double>(n), -aexp);
    auto fn = estimate(g, a, h, n);
    auto fstar = estimate(g, b, 0.4, n);
    const double d1 = 3.0 * U(rng);
    const double d2 = d1 + 3.0 * U(rng);
    const double v = 1.0 + 50.0 * U(rng);
    const double eps = 0.01 + 0.99 * U(rng);

    auto small = band_hat(fstar, fn, 0.6, v, d1);
    auto large = band_hat(fstar, fn, 0.6, v, d2);
    for (std::size_t i = 0; i < m; ++i) {
      EXPECT_GE(small.intervals[i].lower(), large.intervals[i].lower());
      EXPECT_LE(small.intervals[i].upper(), large.intervals[i].upper());
    }

    auto br = band_bickel_rosenblatt(fn, k, 0.05);
    auto star = band_translated(fstar, fn, k, 0.05);
    EXPECT_EQ(values_of(br.intervals, half_width), values_of(star.intervals, half_width));

    auto plain = band_simplified(fstar, fn, 0.6);
    auto tilde = band_truncated(fstar, fn, 0.6, eps, Truncation::tilde);
    for (std::size_t i = 0; i < m; ++i) {
      EXPECT_GE(tilde.intervals[i].half_width, plain.intervals[i].half_width);
      if (fn.values[i] >= eps)
        EXPECT_EQ(tilde.intervals[i].half_width, plain.intervals[i].half_width);
    }

    if (*std::max_element(a.begin(), a.end()) > 0.0) {
      auto flat = band_truncated(fstar, fn, 0.6, 1.0, Truncation::sup);
      for (const auto& iv : flat.intervals)
        EXPECT_EQ(iv.half_width, flat.intervals[0].half_width);
    }

    std::vector<double> centers = values_of(star.intervals, [](const PointwiseInterval& i) {
      return i.center;
    });
    EXPECT_TRUE(band_contains(star, centers).contained);
  }
}

TEST(BandSpecTest, FamilyTruncationCombinations)
{
  EXPECT_NO_THROW(validate_band_spec({ BandFamily::truncated, Truncation::sup }, 2));
  EXPECT_NO_THROW(validate_band_spec({ BandFamily::simplified, Truncation::none }, 2));
  EXPECT_THROW(validate_band_spec({ BandFamily::simplified, Truncation::sup }, 1),
               std::invalid_argument);
  EXPECT_THROW(validate_band_spec({ BandFamily::truncated, Truncation::none }, 1),
               std::invalid_argument);
  EXPECT_THROW(validate_band_spec({ BandFamily::bickel_rosenblatt, Truncation::none }, 2),
               std::domain_error);
  EXPECT_THROW(validate_band_spec({ BandFamily::check, Truncation::none }, 1),
               std::invalid_argument);
}

TEST(BandSpecTest, Parsing)
{
  EXPECT_EQ(parse_band_family("br"), BandFamily::bickel_rosenblatt);
  EXPECT_EQ(parse_band_family("truncated"), BandFamily::truncated);
  EXPECT_EQ(parse_truncation("tilde"), Truncation::tilde);
  EXPECT_THROW(parse_band_family("wide"), std::invalid_argument);
  EXPECT_THROW(parse_truncation("floor"), std::invalid_argument);
}

TEST(BuildBand, UsesScheduleAtSampleSize)
{
  auto schedule = preset("translated", { .a = 0.3 });
  const std::size_t n = 2000;
  auto g = grid1(-1.0, 1.0, 0.5);
  const double h = rate_eval(schedule.h, n);
  const double hstar = rate_eval(schedule.h_star, n);
  auto fn = estimate(g, { 0.0, 0.2, 0.4, 0.2, 0.0 }, h, n);
  auto fstar = estimate(g, { 0.05, 0.22, 0.38, 0.21, 0.04 }, hstar, n);
  auto k = Kernel::univariate(KernelShape::epanechnikov);

  auto built = build_band({ BandFamily::truncated, Truncation::sup }, k, schedule, fstar, fn);
  auto direct = band_truncated(fstar, fn, 0.6, rate_eval(schedule.eps, n), Truncation::sup);
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_EQ(built.intervals[i].half_width, direct.intervals[i].half_width);

  BandSpec hat{ BandFamily::hat, Truncation::none, 2.0 };
  auto b2 = build_band(hat, k, schedule, fstar, fn);
  auto d2 = band_hat(fstar, fn, 0.6, rate_eval(schedule.v, n), 2.0);
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_EQ(b2.intervals[i].half_width, d2.intervals[i].half_width);

  BandSpec tr{ BandFamily::translated, Truncation::none };
  EXPECT_NO_THROW(build_band(tr, k, schedule, fstar, fn));
  auto same_h = schedule;
  same_h.h_star = same_h.h;
  EXPECT_THROW(build_band(tr, k, same_h, fstar, fn), std::domain_error);
}
