#include "kdeband/errors.hpp"
#include "kdeband/io.hpp"
#include "kdeband/report.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sstream>

using namespace kdeband;

TEST(FormatDouble, ShortestRoundTrip)
{
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(-0.5625), "-0.5625");
  for (double x : { 1.0 / 3.0, 2.0 / 7.0, 1e-300, 123456.789e10 })
    EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(ReadCsv, HeaderAndRows)
{
  std::istringstream in("x,y\n1,2\n3, 4\n\n5,6\n");
  auto s = read_sample_csv(in);
  EXPECT_EQ(s.dimension(), 2u);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.values(), (std::vector<double>{ 1, 2, 3, 4, 5, 6 }));
}

TEST(ReadCsv, SingleRowWithoutHeader)
{
  std::istringstream in("0.0\n");
  auto s = read_sample_csv(in);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.values()[0], 0.0);
}

TEST(ReadCsv, MalformedRowNamesLine)
{
  std::istringstream in("1\n2\nfoo\n");
  try {
    read_sample_csv(in);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_sample_csv(ragged), DataError);
  std::istringstream empty("x\n");
  EXPECT_THROW(read_sample_csv(empty), DataError);
}

TEST(ReadCsv, MissingFile)
{
  EXPECT_THROW(read_sample_csv(std::string("/nonexistent/file.csv")), std::ios_base::failure);
}

TEST(WriteCsv, EstimateAndBand)
{
  auto g = std::make_shared<const EvaluationGrid>(std::vector<Interval>{ { -1.0, 1.0 } },
                                                  std::vector<double>{ 1.0 });
  DensityEstimate fn{ g, { 0.0, 0.75, 0.0 }, 1.0, 1, "epanechnikov" };
  std::ostringstream out;
  write_estimate_csv(out, fn);
  EXPECT_EQ(out.str(), "x1,value\n-1,0\n0,0.75\n1,0\n");

  ConfidenceBand band;
  band.grid = g;
  band.intervals = { { 0.1, 0.05 }, { 0.5, 0.25 }, { 0.1, 0.05 } };
  band.truncation_triggered = { 1, 0, 1 };
  band.family = BandFamily::truncated;
  band.truncation = Truncation::sup;
  std::ostringstream b;
  write_band_csv(b, band);
  EXPECT_EQ(b.str(),
            "x1,center,lower,upper,half_width,truncation_triggered\n"
            "-1,0.1,0.05,0.15000000000000002,0.05,1\n"
            "0,0.5,0.25,0.75,0.25,0\n"
            "1,0.1,0.05,0.15000000000000002,0.05,1\n");
}

TEST(ReportJson, ConditionsAreParseable)
{
  auto s = preset("translated", { .a = 0.3 });
  auto text = conditions_json(s, { check_theorem1_conditions(s), check_theorem2_conditions(s) });
  auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["schedule"]["hstar"], "n^-0.175");
  EXPECT_EQ(j["reports"].size(), 2u);
  EXPECT_TRUE(j["reports"][1]["holds"].get<bool>());
  EXPECT_EQ(text.back(), '\n');
}

TEST(ReportJson, A1Report)
{
  auto j = nlohmann::json::parse(a1_report_json(validate_a1(Kernel::from_id("biweight"))));
  EXPECT_TRUE(j["all_pass"].get<bool>());
  EXPECT_EQ(j["clauses"][0]["clause"], "nonnegative");
}

TEST(ReportJson, CoverageFitErrorIsReported)
{
  CoverageReport r;
  r.config.schedule = preset("translated", { .a = 0.3 });
  r.config.n_list = { 100 };
  r.entries = { { 100, 10, 0, 0.0, 0.0, 1.0 } };
  auto j = nlohmann::json::parse(coverage_report_json(r, Correction::none));
  EXPECT_TRUE(j["fit"].is_null());
  EXPECT_TRUE(j.contains("fit_error"));
  EXPECT_EQ(j["config"]["correction"], "none");
  EXPECT_FALSE(j["config"].contains("workers"));
  EXPECT_EQ(j["entries"][0]["R"], 10);
}
