// kdeband: command line front end over the C interface.
//
//   kdeband kde --input x.csv --h 0.3 --out fn.csv
//   kdeband band --input x.csv --preset translated --a 0.3 --family br --out band.csv
//   kdeband check-conditions --preset thinner_mse --a 0.75
//   kdeband simulate --preset translated --a 0.3 --n 500,2000 --reps 200
//
// Every option can also come from a flat key=value file (--config); keys
// are the long option names without the dashes. Flags given on the command
// line override the file. --save-config writes the effective settings.

#include "kdeband/kdeband.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

enum ExitCode
{
  exit_ok = 0,
  exit_usage = 1,
  exit_data = 2
};

//! Usage or configuration problem (exit code 1).
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

//! Failure reported by the library; carries its status.
struct LibraryError : std::runtime_error
{
  kb_status status;
  LibraryError(kb_status s, const std::string& what)
    : std::runtime_error(what)
    , status(s)
  {}
};

void check(kb_status s)
{
  if (s != KB_OK)
    throw LibraryError(s, kb_last_error());
}

int exit_code_for(kb_status s)
{
  switch (s) {
    case KB_ERROR_DATA:
    case KB_ERROR_IO:
    case KB_ERROR_DIMENSION_MISMATCH:
      return exit_data;
    default:
      return exit_usage;
  }
}

// Owning wrappers for the opaque handles.
template<class T, void (*Destroy)(T*)>
struct Handle
{
  T* ptr{ nullptr };
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(ptr); }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using KernelHandle = Handle<kb_kernel, kb_kernel_destroy>;
using SampleHandle = Handle<kb_sample, kb_sample_destroy>;
using GridHandle = Handle<kb_grid, kb_grid_destroy>;
using EstimateHandle = Handle<kb_estimate, kb_estimate_destroy>;
using ScheduleHandle = Handle<kb_schedule, kb_schedule_destroy>;
using BandHandle = Handle<kb_band, kb_band_destroy>;
using ReportHandle = Handle<kb_report, kb_report_destroy>;

std::string take_string(char* s)
{
  std::string out(s ? s : "");
  kb_string_free(s);
  return out;
}

// ---- settings ----------------------------------------------------------

// Keys in the order they are echoed and saved.
const std::vector<std::string> all_keys = {
  "input",   "density",       "d",      "kernel", "preset", "a",     "e",
  "c-star",  "v-star",        "eps-star", "h-log-variant", "h",   "hstar", "v",
  "eps",     "family",        "trunc",  "delta",  "alpha",  "lo",    "hi",
  "step",    "n",             "reps",   "seed",   "workers", "correction",
  "almost-sure", "paths",     "beyond", "out",    "plot-out"
};

// Keys that only steer where output goes or how fast it is produced; they
// are saved but not echoed, so that reports depend on results only.
bool echoed(const std::string& key)
{
  return key != "out" && key != "plot-out" && key != "workers";
}

using Settings = std::map<std::string, std::string>;

std::string trim(const std::string& s)
{
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Settings read_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot open config file " + path);
  Settings out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#')
      continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void write_config_file(const std::string& path, const std::string& subcommand, const Settings& s)
{
  std::ofstream out(path);
  if (!out)
    throw UsageError("cannot write config file " + path);
  out << "subcommand=" << subcommand << "\n";
  for (const auto& key : all_keys) {
    auto it = s.find(key);
    if (it != s.end())
      out << key << "=" << it->second << "\n";
  }
}

ordered_json settings_json(const std::string& subcommand, const Settings& s)
{
  ordered_json j;
  j["subcommand"] = subcommand;
  for (const auto& key : all_keys) {
    auto it = s.find(key);
    if (it != s.end() && echoed(key))
      j[key] = it->second;
  }
  return j;
}

class Resolved
{
public:
  Resolved(std::string subcommand, Settings s)
    : subcommand_(std::move(subcommand))
    , s_(std::move(s))
  {}

  const std::string& subcommand() const { return subcommand_; }
  const Settings& settings() const { return s_; }
  bool has(const std::string& key) const { return s_.count(key) > 0; }

  std::optional<std::string> get(const std::string& key) const
  {
    auto it = s_.find(key);
    if (it == s_.end())
      return std::nullopt;
    return it->second;
  }

  std::string str(const std::string& key, const std::string& fallback) const
  {
    return get(key).value_or(fallback);
  }

  std::string required(const std::string& key) const
  {
    auto v = get(key);
    if (!v)
      throw UsageError("--" + key + " is required");
    return *v;
  }

  double number(const std::string& key, double fallback) const
  {
    auto v = get(key);
    return v ? parse_double(key, *v) : fallback;
  }

  std::optional<double> maybe_number(const std::string& key) const
  {
    auto v = get(key);
    if (!v)
      return std::nullopt;
    return parse_double(key, *v);
  }

  unsigned long long integer(const std::string& key, unsigned long long fallback) const
  {
    auto v = get(key);
    return v ? parse_unsigned(key, *v) : fallback;
  }

  bool flag(const std::string& key) const
  {
    auto v = get(key);
    if (!v)
      return false;
    if (*v == "true" || *v == "1")
      return true;
    if (*v == "false" || *v == "0")
      return false;
    throw UsageError("--" + key + " expects true or false, got '" + *v + "'");
  }

  std::vector<double> numbers(const std::string& key) const
  {
    std::vector<double> out;
    for (const auto& item : split(required(key)))
      out.push_back(parse_double(key, item));
    return out;
  }

  std::vector<std::size_t> counts(const std::string& key) const
  {
    std::vector<std::size_t> out;
    for (const auto& item : split(required(key)))
      out.push_back(static_cast<std::size_t>(parse_unsigned(key, item)));
    return out;
  }

  void put(const std::string& key, const std::string& value) { s_[key] = value; }

private:
  static std::vector<std::string> split(const std::string& s)
  {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
      out.push_back(trim(item));
    return out;
  }

  static double parse_double(const std::string& key, const std::string& v)
  {
    try {
      std::size_t used = 0;
      double x = std::stod(v, &used);
      if (used == v.size())
        return x;
    } catch (const std::exception&) {
    }
    throw UsageError("--" + key + " expects a number, got '" + v + "'");
  }

  static unsigned long long parse_unsigned(const std::string& key, const std::string& v)
  {
    try {
      std::size_t used = 0;
      if (!v.empty() && v[0] != '-') {
        auto x = std::stoull(v, &used);
        if (used == v.size())
          return x;
      }
    } catch (const std::exception&) {
    }
    throw UsageError("--" + key + " expects a nonnegative integer, got '" + v + "'");
  }

  std::string subcommand_;
  Settings s_;
};

// ---- shared building blocks -------------------------------------------

const std::vector<std::string> rate_keys = { "h", "hstar", "v", "eps" };
const std::vector<std::string> preset_keys = { "a", "e", "c-star", "v-star", "eps-star", "h-log-variant" };

bool uses_alpha(kb_band_family f)
{
  return f == KB_BAND_BICKEL_ROSENBLATT || f == KB_BAND_TRANSLATED;
}

bool uses_truncation(kb_band_family f)
{
  return f == KB_BAND_CHECK || f == KB_BAND_TRUNCATED;
}

kb_rate rate_from(const Resolved& r, const std::string& key)
{
  kb_rate out;
  auto text = r.required(key);
  if (kb_rate_parse(text.c_str(), &out) != KB_OK)
    throw UsageError("--" + key + ": " + kb_last_error());
  return out;
}

// Preset or explicit rates; the two are mutually exclusive. `needed` lists
// the explicit rates the subcommand cannot do without; hstar falls back to
// h and any other missing rate to the constant 1.
void build_schedule(const Resolved& r,
                    std::size_t dim,
                    const std::vector<std::string>& needed,
                    ScheduleHandle& out)
{
  if (r.has("preset")) {
    for (const auto& k : rate_keys)
      if (r.has(k))
        throw UsageError("--preset and --" + k + " are mutually exclusive");
    kb_preset_params p = kb_preset_params_default();
    if (auto a = r.maybe_number("a"))
      p.a = *a;
    if (auto e = r.maybe_number("e"))
      p.e = *e;
    p.c_star = r.number("c-star", 1.0);
    p.v_star = r.number("v-star", 1.0);
    p.eps_star = r.number("eps-star", 1.0);
    p.h_log_variant = r.flag("h-log-variant") ? 1 : 0;
    check(kb_schedule_preset(r.required("preset").c_str(), dim, &p, out.out()));
    return;
  }
  for (const auto& k : preset_keys)
    if (r.has(k))
      throw UsageError("--" + k + " only applies together with --preset");
  for (const auto& k : needed)
    if (!r.has(k))
      throw UsageError("--" + k + " is required unless --preset is given");
  const kb_rate one{ 1.0, 0.0, 0.0, 0.0 };
  kb_rate h = rate_from(r, "h");
  kb_rate hstar = r.has("hstar") ? rate_from(r, "hstar") : h;
  kb_rate v = r.has("v") ? rate_from(r, "v") : one;
  kb_rate eps = r.has("eps") ? rate_from(r, "eps") : one;
  check(kb_schedule_from_rates(dim, h, hstar, v, eps, out.out()));
}

// Constant rates are usable for any n; the others need n >= 3.
double rate_at(kb_rate rate, std::size_t n)
{
  if (rate.n_exponent == 0.0 && rate.log_exponent == 0.0 && rate.loglog_exponent == 0.0)
    return rate.coefficient;
  double out;
  check(kb_rate_eval(rate, static_cast<double>(n), &out));
  return out;
}

kb_band_spec band_spec_from(const Resolved& r)
{
  kb_band_spec spec;
  check(kb_band_family_parse(r.str("family", "truncated").c_str(), &spec.family));
  if (uses_alpha(spec.family) && r.has("delta"))
    throw UsageError("--delta does not apply to family " + r.str("family", "") + "; use --alpha");
  if (!uses_alpha(spec.family) && r.has("alpha"))
    throw UsageError("--alpha does not apply to family " + r.str("family", "truncated") +
                     "; use --delta");
  std::string trunc_default = uses_truncation(spec.family) ? "sup" : "none";
  check(kb_truncation_parse(r.str("trunc", trunc_default).c_str(), &spec.truncation));
  spec.delta = r.number("delta", std::sqrt(2.0));
  spec.alpha = r.number("alpha", 0.05);
  return spec;
}

// Region from --lo / --hi, or the data range widened by three bandwidths.
void region_from(const Resolved& r,
                 const kb_sample* sample,
                 double width,
                 std::vector<double>& lo,
                 std::vector<double>& hi)
{
  const std::size_t d = kb_sample_dimension(sample);
  if (r.has("lo") != r.has("hi"))
    throw UsageError("--lo and --hi must be given together");
  if (r.has("lo")) {
    lo = r.numbers("lo");
    hi = r.numbers("hi");
    if (lo.size() == 1 && d > 1)
      lo.assign(d, lo[0]);
    if (hi.size() == 1 && d > 1)
      hi.assign(d, hi[0]);
    if (lo.size() != d || hi.size() != d)
      throw UsageError("--lo and --hi need one value or " + std::to_string(d) + " values");
    return;
  }
  const double* x = kb_sample_data(sample);
  const std::size_t n = kb_sample_size(sample);
  lo.assign(d, INFINITY);
  hi.assign(d, -INFINITY);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], x[i * d + k]);
      hi[k] = std::max(hi[k], x[i * d + k]);
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] -= 3.0 * width;
    hi[k] += 3.0 * width;
  }
}

void grid_from(const Resolved& r, const kb_sample* sample, double h, double hstar, GridHandle& grid)
{
  std::vector<double> lo, hi;
  region_from(r, sample, std::max(h, hstar), lo, hi);
  std::vector<double> step = r.has("step") ? r.numbers("step")
                                           : std::vector<double>{ std::min(h, hstar) / 4.0 };
  check(kb_grid_create(lo.size(), lo.data(), hi.data(), step.data(), step.size(), grid.out()));
}

void load_sample(const Resolved& r, SampleHandle& sample)
{
  check(kb_sample_read_csv(r.required("input").c_str(), sample.out()));
}

void emit(const Resolved& r, const std::string& text, bool to_out = true)
{
  if (to_out && r.has("out")) {
    std::ofstream out(*r.get("out"));
    if (!out)
      throw LibraryError(KB_ERROR_IO, "cannot write " + *r.get("out"));
    out << text;
    return;
  }
  std::cout << text;
}

std::string dump(const ordered_json& j)
{
  return j.dump(2) + "\n";
}

// ---- subcommands -------------------------------------------------------

int run_kde(const Resolved& r)
{
  SampleHandle sample;
  load_sample(r, sample);
  const std::size_t n = kb_sample_size(sample.get());
  const std::size_t d = kb_sample_dimension(sample.get());
  KernelHandle kernel;
  check(kb_kernel_create(r.str("kernel", "epanechnikov").c_str(), d, kernel.out()));
  ScheduleHandle schedule;
  build_schedule(r, d, { "h" }, schedule);
  kb_rate h_rate;
  kb_schedule_rates(schedule.get(), &h_rate, nullptr, nullptr, nullptr);
  const double h = rate_at(h_rate, n);

  GridHandle grid;
  grid_from(r, sample.get(), h, h, grid);
  EstimateHandle fn;
  check(kb_kde_on_grid(sample.get(), kernel.get(), h, grid.get(), fn.out()));

  size_t argmax = 0;
  double sup = 0.0;
  check(kb_estimate_sup(fn.get(), &argmax, &sup));
  std::vector<double> x(d);
  check(kb_grid_point(grid.get(), argmax, x.data()));

  ordered_json summary;
  summary["n"] = n;
  summary["d"] = d;
  summary["h"] = h;
  summary["grid_points"] = kb_grid_size(grid.get());
  summary["sup"] = { { "value", sup }, { "x", x } };
  summary["config"] = settings_json(r.subcommand(), r.settings());

  if (r.has("out")) {
    check(kb_estimate_write_csv(fn.get(), r.get("out")->c_str()));
    std::cout << dump(summary);
  } else {
    std::cout.flush();
    check(kb_estimate_write_csv(fn.get(), "/dev/stdout"));
    std::cerr << dump(summary);
  }
  return exit_ok;
}

int run_band(const Resolved& r)
{
  SampleHandle sample;
  load_sample(r, sample);
  const std::size_t n = kb_sample_size(sample.get());
  const std::size_t d = kb_sample_dimension(sample.get());
  KernelHandle kernel;
  check(kb_kernel_create(r.str("kernel", "epanechnikov").c_str(), d, kernel.out()));
  kb_band_spec spec = band_spec_from(r);

  std::vector<std::string> needed = { "h" };
  if (spec.family == KB_BAND_HAT || spec.family == KB_BAND_CHECK)
    needed.push_back("v");
  if (spec.truncation != KB_TRUNCATION_NONE)
    needed.push_back("eps");
  ScheduleHandle schedule;
  build_schedule(r, d, needed, schedule);
  kb_rate h_rate, hstar_rate;
  kb_schedule_rates(schedule.get(), &h_rate, &hstar_rate, nullptr, nullptr);
  const double h = rate_at(h_rate, n);
  const double hstar = rate_at(hstar_rate, n);

  GridHandle grid;
  grid_from(r, sample.get(), h, hstar, grid);
  EstimateHandle fstar, fn;
  check(kb_kde_on_grid(sample.get(), kernel.get(), hstar, grid.get(), fstar.out()));
  check(kb_kde_on_grid(sample.get(), kernel.get(), h, grid.get(), fn.out()));
  BandHandle band;
  check(kb_band_build(&spec, kernel.get(), schedule.get(), fstar.get(), fn.get(), band.out()));

  char* raw = nullptr;
  check(kb_band_summary_json(band.get(), &raw));
  ordered_json summary = ordered_json::parse(take_string(raw));
  summary["config"] = settings_json(r.subcommand(), r.settings());

  if (r.has("out")) {
    check(kb_band_write_csv(band.get(), r.get("out")->c_str()));
    std::cout << dump(summary);
  } else {
    std::cout.flush();
    check(kb_band_write_csv(band.get(), "/dev/stdout"));
    std::cerr << dump(summary);
  }
  return exit_ok;
}

int run_check_conditions(const Resolved& r)
{
  const std::size_t d = r.integer("d", 1);
  ScheduleHandle schedule;
  build_schedule(r, d, { "h", "v", "eps" }, schedule);
  char* raw = nullptr;
  int holds = 0;
  check(kb_schedule_check(schedule.get(), KB_CONDITION_ALL, &holds, &raw));
  ordered_json out = ordered_json::parse(take_string(raw));
  out["config"] = settings_json(r.subcommand(), r.settings());
  emit(r, dump(out));
  return exit_ok;
}

struct SimulationInputs
{
  ScheduleHandle schedule;
  std::string density;
  std::string kernel;
  std::vector<double> lo, hi, step;
  std::vector<std::size_t> n_list;
  kb_simulation_config config{};
};

void prepare_simulation(const Resolved& r, SimulationInputs& in)
{
  const std::size_t d = r.integer("d", 1);
  build_schedule(r, d, { "h", "v", "eps" }, in.schedule);
  in.density = r.str("density", "gaussian");
  in.kernel = r.str("kernel", "epanechnikov");
  in.n_list = r.counts("n");

  auto& c = in.config;
  c.density = in.density.c_str();
  c.dim = d;
  c.kernel = in.kernel.c_str();
  c.schedule = in.schedule.get();
  c.band = band_spec_from(r);
  if (r.has("lo") != r.has("hi"))
    throw UsageError("--lo and --hi must be given together");
  auto widen = [d](std::vector<double> v, const char* key) {
    if (v.size() == 1 && d > 1)
      v.assign(d, v[0]);
    if (v.size() != d)
      throw UsageError(std::string("--") + key + " needs one value or " + std::to_string(d) +
                       " values");
    return v;
  };
  if (r.has("lo")) {
    in.lo = widen(r.numbers("lo"), "lo");
    in.hi = widen(r.numbers("hi"), "hi");
    c.lo = in.lo.data();
    c.hi = in.hi.data();
  }
  if (r.has("step")) {
    in.step = widen(r.numbers("step"), "step");
    c.step = in.step.data();
  }
  c.n_list = in.n_list.data();
  c.n_count = in.n_list.size();
  c.replications = r.integer("reps", 100);
  c.seed = r.integer("seed", 42);
  c.workers = static_cast<unsigned>(r.integer("workers", 1));
}

kb_correction correction_from(const Resolved& r)
{
  auto name = r.str("correction", "half");
  if (name == "none")
    return KB_CORRECTION_NONE;
  if (name == "half")
    return KB_CORRECTION_HALF;
  throw UsageError("--correction must be none or half, got '" + name + "'");
}

void write_plot_data(const std::string& path, const kb_report* report, kb_correction correction)
{
  std::vector<kb_coverage_entry> entries(kb_report_size(report));
  bool any_zero = false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    check(kb_report_entry(report, i, &entries[i]));
    any_zero = any_zero || entries[i].misses == 0;
  }
  std::ofstream out(path);
  if (!out)
    throw LibraryError(KB_ERROR_IO, "cannot write " + path);
  out << "n,w_n,phat,log_phat\n";
  for (const auto& e : entries) {
    double p = e.phat;
    if (correction == KB_CORRECTION_HALF && any_zero)
      p = (static_cast<double>(e.misses) + 0.5) / (static_cast<double>(e.replications) + 1.0);
    out << e.n << "," << ordered_json(e.w_n).dump() << "," << ordered_json(p).dump() << ",";
    if (p > 0.0)
      out << ordered_json(std::log(p)).dump();
    out << "\n";
  }
}

int run_simulate(const Resolved& r)
{
  SimulationInputs in;
  prepare_simulation(r, in);
  if (r.flag("almost-sure")) {
    if (r.has("plot-out"))
      throw UsageError("--plot-out does not apply to --almost-sure runs");
    const std::size_t paths = r.integer("paths", 20);
    const std::size_t beyond = r.integer("beyond", 0);
    char* raw = nullptr;
    check(kb_almost_sure_study(&in.config, paths, beyond, nullptr, &raw));
    ordered_json out = ordered_json::parse(take_string(raw));
    out["effective_config"] = settings_json(r.subcommand(), r.settings());
    emit(r, dump(out));
    return exit_ok;
  }
  for (const char* k : { "paths", "beyond" })
    if (r.has(k))
      throw UsageError(std::string("--") + k + " only applies with --almost-sure");

  const kb_correction correction = correction_from(r);
  ReportHandle report;
  check(kb_simulate(&in.config, report.out()));
  char* raw = nullptr;
  check(kb_report_json(report.get(), correction, &raw));
  ordered_json out = ordered_json::parse(take_string(raw));
  out["effective_config"] = settings_json(r.subcommand(), r.settings());
  emit(r, dump(out));
  if (r.has("plot-out"))
    write_plot_data(*r.get("plot-out"), report.get(), correction);
  return exit_ok;
}

// ---- argument parsing --------------------------------------------------

struct Subcommand
{
  CLI::App* app;
  std::vector<std::string> keys;
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::string config_path;
  std::string save_path;
};

const std::map<std::string, std::string>& help_text()
{
  static const std::map<std::string, std::string> text = {
    { "input", "CSV file with one observation per row" },
    { "density", "true density: gaussian, mixture, compact_beta, smoothed_uniform" },
    { "d", "dimension" },
    { "kernel", "kernel id, e.g. epanechnikov or product:gaussian,biweight" },
    { "preset", "bickel_rosenblatt, translated, thinner_mse or thinner_sup" },
    { "a", "preset exponent a" },
    { "e", "preset exponent e of eps_n" },
    { "c-star", "preset constant c*" },
    { "v-star", "preset constant v*" },
    { "eps-star", "preset constant eps*" },
    { "h-log-variant", "thinner_mse: h = c* [n / log n]^(-1/(d+4))" },
    { "h", "rate of h_n, e.g. n^-0.3" },
    { "hstar", "rate of h*_n (defaults to h)" },
    { "v", "rate of v_n" },
    { "eps", "rate of eps_n" },
    { "family", "hat, check, br, translated, simplified or truncated" },
    { "trunc", "none, tilde or sup" },
    { "delta", "band multiplier delta" },
    { "alpha", "nominal level alpha (br, translated)" },
    { "lo", "lower corner of C, comma separated" },
    { "hi", "upper corner of C, comma separated" },
    { "step", "grid step, one value or one per axis" },
    { "n", "sample sizes, comma separated" },
    { "reps", "replications per sample size" },
    { "seed", "master seed" },
    { "workers", "threads" },
    { "correction", "none or half" },
    { "almost-sure", "run nested sample paths instead of independent replications" },
    { "paths", "number of sample paths (--almost-sure)" },
    { "beyond", "count paths without a miss beyond this n (--almost-sure)" },
    { "out", "output file" },
    { "plot-out", "CSV of log phat against w_n" },
  };
  return text;
}

const std::vector<std::string> flag_keys = { "h-log-variant", "almost-sure" };

void add_options(Subcommand& sub, const std::vector<std::string>& keys)
{
  sub.keys = keys;
  for (const auto& key : keys) {
    const auto& help = help_text().at(key);
    if (std::find(flag_keys.begin(), flag_keys.end(), key) != flag_keys.end())
      sub.app->add_flag("--" + key, sub.flags[key], help);
    else
      sub.app->add_option("--" + key, sub.values[key], help);
  }
  sub.app->add_option("--config", sub.config_path, "read options from a key=value file");
  sub.app->add_option("--save-config", sub.save_path, "write the effective options to a file");
}

Resolved resolve(const std::string& name, const Subcommand& sub)
{
  Settings settings;
  if (!sub.config_path.empty()) {
    for (const auto& [key, value] : read_config_file(sub.config_path)) {
      if (key == "subcommand") {
        if (value != name)
          throw UsageError("config file is for subcommand '" + value + "', not '" + name + "'");
        continue;
      }
      if (std::find(sub.keys.begin(), sub.keys.end(), key) == sub.keys.end())
        throw UsageError("config key '" + key + "' does not apply to " + name);
      settings[key] = value;
    }
  }
  for (const auto& key : sub.keys) {
    auto* opt = sub.app->get_option("--" + key);
    if (opt->count() == 0)
      continue;
    auto f = sub.flags.find(key);
    settings[key] = f != sub.flags.end() ? (f->second ? "true" : "false") : sub.values.at(key);
  }
  return Resolved(name, std::move(settings));
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "Kernel density estimates, confidence bands and coverage studies" };
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", kb_version());

  const std::vector<std::string> schedule_keys = {
    "preset", "a", "e", "c-star", "v-star", "eps-star", "h-log-variant", "h", "hstar", "v", "eps"
  };
  const std::vector<std::string> band_keys = { "family", "trunc", "delta", "alpha" };
  auto concat = [](std::initializer_list<std::vector<std::string>> parts) {
    std::vector<std::string> out;
    for (const auto& p : parts)
      out.insert(out.end(), p.begin(), p.end());
    return out;
  };

  std::map<std::string, Subcommand> subs;
  subs["kde"].app = app.add_subcommand("kde", "density estimate on a grid from a CSV sample");
  add_options(subs["kde"],
              concat({ { "input", "kernel" }, schedule_keys, { "lo", "hi", "step", "out" } }));
  subs["band"].app = app.add_subcommand("band", "confidence band from a CSV sample");
  add_options(subs["band"],
              concat({ { "input", "kernel" }, schedule_keys, band_keys, { "lo", "hi", "step", "out" } }));
  subs["check-conditions"].app =
    app.add_subcommand("check-conditions", "check the rate conditions of a schedule");
  add_options(subs["check-conditions"], concat({ { "d" }, schedule_keys, { "out" } }));
  subs["simulate"].app = app.add_subcommand("simulate", "Monte Carlo non-coverage study");
  add_options(subs["simulate"],
              concat({ { "density", "d", "kernel" },
                       schedule_keys,
                       band_keys,
                       { "lo", "hi", "step", "n", "reps", "seed", "workers", "correction",
                         "almost-sure", "paths", "beyond", "out", "plot-out" } }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? exit_ok : exit_usage;
  }

  for (auto& [name, sub] : subs) {
    if (!sub.app->parsed())
      continue;
    try {
      Resolved r = resolve(name, sub);
      if (!sub.save_path.empty())
        write_config_file(sub.save_path, name, r.settings());
      if (name == "kde")
        return run_kde(r);
      if (name == "band")
        return run_band(r);
      if (name == "check-conditions")
        return run_check_conditions(r);
      return run_simulate(r);
    } catch (const UsageError& e) {
      std::cerr << "kdeband " << name << ": " << e.what() << "\n";
      return exit_usage;
    } catch (const LibraryError& e) {
      std::cerr << "kdeband " << name << ": " << kb_status_name(e.status) << ": " << e.what()
                << "\n";
      return exit_code_for(e.status);
    } catch (const std::exception& e) {
      std::cerr << "kdeband " << name << ": " << e.what() << "\n";
      return exit_usage;
    }
  }
  return exit_usage;
}
