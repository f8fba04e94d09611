#include "kdeband/report.hpp"
#include "kdeband/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace kdeband {

using nlohmann::ordered_json;

namespace {

ordered_json number_or_null(double v)
{
  if (!std::isfinite(v))
    return nullptr;
  return v;
}

ordered_json rate_json(const RateSequence& s)
{
  return { { "expression", format_rate(s) },
           { "c", s.coefficient },
           { "p", s.n_exponent },
           { "q", s.log_exponent },
           { "r", s.loglog_exponent } };
}

ordered_json schedule_json(const ScheduleSet& s)
{
  return { { "d", s.dim },
           { "h", format_rate(s.h) },
           { "hstar", format_rate(s.h_star) },
           { "v", format_rate(s.v) },
           { "eps", format_rate(s.eps) } };
}

ordered_json config_json(const SimulationConfig& c)
{
  ordered_json j;
  j["density"] = c.density;
  j["d"] = c.dim;
  j["kernel"] = c.kernel;
  j["h"] = format_rate(c.schedule.h);
  j["hstar"] = format_rate(c.schedule.h_star);
  j["v"] = format_rate(c.schedule.v);
  j["eps"] = format_rate(c.schedule.eps);
  j["family"] = to_string(c.band.family);
  j["trunc"] = to_string(c.band.truncation);
  switch (c.band.family) {
    case BandFamily::bickel_rosenblatt:
    case BandFamily::translated:
      j["alpha"] = c.band.alpha;
      break;
    default:
      j["delta"] = c.band.delta;
  }
  if (c.region) {
    ordered_json lo = ordered_json::array();
    ordered_json hi = ordered_json::array();
    for (const auto& iv : *c.region) {
      lo.push_back(iv.lower);
      hi.push_back(iv.upper);
    }
    j["lo"] = lo;
    j["hi"] = hi;
  }
  if (c.step)
    j["step"] = *c.step;
  j["n"] = c.n_list;
  j["reps"] = c.replications;
  j["seed"] = c.seed;
  return j;
}

std::string dump(const ordered_json& j)
{
  return j.dump(2) + "\n";
}

} // namespace

std::string a1_report_json(const A1Report& report)
{
  ordered_json clauses = ordered_json::array();
  for (const auto& c : report.clauses) {
    clauses.push_back({ { "clause", c.name },
                        { "value", number_or_null(c.value) },
                        { "target", number_or_null(c.target) },
                        { "pass", c.pass } });
  }
  return dump({ { "all_pass", report.all_pass() }, { "clauses", clauses } });
}

std::string conditions_json(const ScheduleSet& schedule,
                            const std::vector<ConditionReport>& reports)
{
  ordered_json out;
  out["schedule"] = schedule_json(schedule);
  ordered_json list = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json limits = ordered_json::array();
    for (const auto& l : r.limits) {
      limits.push_back({ { "limit", l.name },
                         { "sequence", rate_json(l.sequence) },
                         { "required", to_string(l.required) },
                         { "actual", to_string(l.actual) },
                         { "verdict", to_string(l.verdict) },
                         { "part_of_condition", l.required_for_condition } });
    }
    list.push_back({ { "condition", r.condition }, { "holds", r.holds() }, { "limits", limits } });
  }
  out["reports"] = list;
  return dump(out);
}

std::string band_summary_json(const ConfidenceBand& band)
{
  double max_hw = 0.0;
  double min_hw = 0.0;
  std::size_t triggered = 0;
  if (!band.intervals.empty()) {
    auto [lo, hi] = std::minmax_element(
      band.intervals.begin(), band.intervals.end(), [](const auto& a, const auto& b) {
        return a.half_width < b.half_width;
      });
    min_hw = lo->half_width;
    max_hw = hi->half_width;
  }
  for (auto t : band.truncation_triggered)
    triggered += t;
  const auto& p = band.params;
  ordered_json params;
  params["n"] = p.n;
  params["kappa"] = p.kappa;
  params["h"] = p.h;
  params["hstar"] = p.h_star;
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v)
      params[key] = number_or_null(*v);
  };
  put("delta", p.delta);
  put("alpha", p.alpha);
  put("v_n", p.v_n);
  put("eps_n", p.eps_n);
  put("threshold", p.threshold);
  put("z_alpha", p.z_alpha);
  put("u_n", p.u_n);
  params["width_factor"] = p.width_factor;

  ordered_json out;
  out["family"] = to_string(band.family);
  out["truncation"] = to_string(band.truncation);
  out["points"] = band.intervals.size();
  out["max_half_width"] = max_hw;
  out["min_half_width"] = min_hw;
  out["constant_width"] = max_hw == min_hw;
  out["truncation_trigger_fraction"] =
    band.intervals.empty() ? 0.0
                           : static_cast<double>(triggered) /
                               static_cast<double>(band.intervals.size());
  out["parameters"] = params;
  return dump(out);
}

std::string coverage_report_json(const CoverageReport& report, Correction correction)
{
  ordered_json out;
  ordered_json config = config_json(report.config);
  config["correction"] = to_string(correction);
  out["config"] = config;
  ordered_json entries = ordered_json::array();
  for (const auto& e : report.entries) {
    entries.push_back({ { "n", e.n },
                        { "R", e.replications },
                        { "miss", e.misses },
                        { "phat", e.phat },
                        { "se", e.se },
                        { "w_n", e.w_n } });
  }
  out["entries"] = entries;
  try {
    auto fit = fit_log_level(report, correction);
    out["fit"] = { { "slope", fit.slope },
                   { "intercept", fit.intercept },
                   { "corrected", fit.corrected },
                   { "slope_se", fit.slope_se ? ordered_json(*fit.slope_se) : ordered_json() },
                   { "points", fit.points_used } };
  } catch (const std::domain_error& e) {
    out["fit"] = nullptr;
    out["fit_error"] = e.what();
  }
  return dump(out);
}

std::string almost_sure_json(const SimulationConfig& config, const AlmostSureStudy& study)
{
  ordered_json out;
  out["config"] = config_json(config);
  out["beyond"] = study.beyond;
  out["fraction_clean"] = study.fraction_clean;
  ordered_json paths = ordered_json::array();
  for (const auto& p : study.paths) {
    std::vector<int> covered(p.covered.begin(), p.covered.end());
    paths.push_back({ { "seed", p.seed },
                      { "covered", covered },
                      { "last_miss", p.last_miss ? ordered_json(*p.last_miss) : ordered_json("none observed") } });
  }
  out["paths"] = paths;
  return dump(out);
}

} // namespace kdeband
