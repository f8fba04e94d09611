#include "kdeband/kdeband.h"

#include "kdeband/bands.hpp"
#include "kdeband/coverage.hpp"
#include "kdeband/errors.hpp"
#include "kdeband/estimator.hpp"
#include "kdeband/io.hpp"
#include "kdeband/kernels.hpp"
#include "kdeband/report.hpp"
#include "kdeband/schedules.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <ios>
#include <memory>
#include <new>
#include <string>

using namespace kdeband;

struct kb_kernel
{
  Kernel value;
};

struct kb_sample
{
  Sample value;
};

struct kb_grid
{
  std::shared_ptr<const EvaluationGrid> value;
};

struct kb_estimate
{
  DensityEstimate value;
};

struct kb_schedule
{
  ScheduleSet value;
};

struct kb_band
{
  ConfidenceBand value;
};

struct kb_density
{
  TrueDensity value;
};

struct kb_report
{
  CoverageReport value;
};

namespace {

thread_local std::string last_error;

kb_status fail(kb_status status, const char* what)
{
  last_error = what;
  return status;
}

// Runs `body` and maps the exception hierarchy onto status codes. Order
// matters: the library's own types derive from the standard ones.
template<class F>
kb_status guarded(F&& body)
{
  try {
    body();
    last_error.clear();
    return KB_OK;
  } catch (const DimensionMismatch& e) {
    return fail(KB_ERROR_DIMENSION_MISMATCH, e.what());
  } catch (const DataError& e) {
    return fail(KB_ERROR_DATA, e.what());
  } catch (const std::domain_error& e) {
    return fail(KB_ERROR_OUT_OF_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(KB_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(KB_ERROR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(KB_ERROR_INTERNAL, "out of memory");
  } catch (const std::runtime_error& e) {
    return fail(KB_ERROR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(KB_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(KB_ERROR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name)
{
  if (p == nullptr)
    throw std::invalid_argument(std::string(name) + " must not be NULL");
}

char* copy_string(const std::string& s)
{
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

RateSequence to_cpp(kb_rate r)
{
  return { r.coefficient, r.n_exponent, r.log_exponent, r.loglog_exponent };
}

kb_rate to_c(const RateSequence& r)
{
  return { r.coefficient, r.n_exponent, r.log_exponent, r.loglog_exponent };
}

BandSpec to_cpp(const kb_band_spec& s)
{
  BandSpec out;
  switch (s.family) {
    case KB_BAND_HAT: out.family = BandFamily::hat; break;
    case KB_BAND_CHECK: out.family = BandFamily::check; break;
    case KB_BAND_BICKEL_ROSENBLATT: out.family = BandFamily::bickel_rosenblatt; break;
    case KB_BAND_TRANSLATED: out.family = BandFamily::translated; break;
    case KB_BAND_SIMPLIFIED: out.family = BandFamily::simplified; break;
    case KB_BAND_TRUNCATED: out.family = BandFamily::truncated; break;
    default: throw std::invalid_argument("unknown band family");
  }
  switch (s.truncation) {
    case KB_TRUNCATION_NONE: out.truncation = Truncation::none; break;
    case KB_TRUNCATION_TILDE: out.truncation = Truncation::tilde; break;
    case KB_TRUNCATION_SUP: out.truncation = Truncation::sup; break;
    default: throw std::invalid_argument("unknown truncation");
  }
  out.delta = s.delta;
  out.alpha = s.alpha;
  return out;
}

Correction to_cpp(kb_correction c)
{
  switch (c) {
    case KB_CORRECTION_NONE: return Correction::none;
    case KB_CORRECTION_HALF: return Correction::half;
  }
  throw std::invalid_argument("unknown correction");
}

kb_log_level_fit to_c(const LogLevelFit& f)
{
  return { f.slope,
           f.intercept,
           f.slope_se ? *f.slope_se : std::nan(""),
           f.points_used,
           f.corrected ? 1 : 0 };
}

SimulationConfig to_cpp(const kb_simulation_config& c)
{
  require(c.density, "density");
  require(c.kernel, "kernel");
  require(c.schedule, "schedule");
  if (c.n_count > 0)
    require(c.n_list, "n_list");
  SimulationConfig out;
  out.density = c.density;
  out.dim = c.dim;
  out.kernel = c.kernel;
  out.schedule = c.schedule->value;
  out.band = to_cpp(c.band);
  if ((c.lo == nullptr) != (c.hi == nullptr))
    throw std::invalid_argument("lo and hi must both be given or both be NULL");
  if (c.lo) {
    std::vector<Interval> region;
    for (std::size_t i = 0; i < c.dim; ++i)
      region.push_back({ c.lo[i], c.hi[i] });
    out.region = region;
  }
  if (c.step)
    out.step = std::vector<double>(c.step, c.step + c.dim);
  out.n_list.assign(c.n_list, c.n_list + c.n_count);
  out.replications = c.replications;
  out.seed = c.seed;
  out.workers = c.workers == 0 ? 1 : c.workers;
  return out;
}

} // namespace

extern "C" {

const char* kb_status_name(kb_status status)
{
  switch (status) {
    case KB_OK: return "ok";
    case KB_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case KB_ERROR_DIMENSION_MISMATCH: return "dimension mismatch";
    case KB_ERROR_OUT_OF_DOMAIN: return "out of domain";
    case KB_ERROR_DATA: return "data error";
    case KB_ERROR_IO: return "i/o error";
    case KB_ERROR_NUMERIC: return "numerical failure";
    case KB_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* kb_last_error(void)
{
  return last_error.c_str();
}

void kb_string_free(char* s)
{
  delete[] s;
}

const char* kb_version(void)
{
  return "1.0.0";
}

// ---- kernels ----

kb_status kb_kernel_create(const char* id, size_t dim, kb_kernel** out)
{
  return guarded([&] {
    require(id, "id");
    require(out, "out");
    *out = new kb_kernel{ Kernel::from_id(id, dim) };
  });
}

void kb_kernel_destroy(kb_kernel* kernel)
{
  delete kernel;
}

size_t kb_kernel_dimension(const kb_kernel* kernel)
{
  return kernel ? kernel->value.dimension() : 0;
}

kb_status kb_kernel_evaluate(const kb_kernel* kernel, const double* z, size_t dim, double* out)
{
  return guarded([&] {
    require(kernel, "kernel");
    require(z, "z");
    require(out, "out");
    *out = kernel->value(std::span<const double>(z, dim));
  });
}

kb_status kb_kernel_kappa(const kb_kernel* kernel, double* out)
{
  return guarded([&] {
    require(kernel, "kernel");
    require(out, "out");
    *out = kernel->value.kappa();
  });
}

kb_status kb_kernel_deriv_sq_integral(const kb_kernel* kernel, double* out)
{
  return guarded([&] {
    require(kernel, "kernel");
    require(out, "out");
    *out = kernel->value.deriv_sq_integral();
  });
}

kb_status kb_kernel_validate_a1(const kb_kernel* kernel, char** json)
{
  return guarded([&] {
    require(kernel, "kernel");
    require(json, "json");
    *json = copy_string(a1_report_json(validate_a1(kernel->value)));
  });
}

// ---- samples, grids, estimates ----

kb_status kb_sample_create(const double* rows, size_t n, size_t dim, kb_sample** out)
{
  return guarded([&] {
    require(out, "out");
    if (n > 0)
      require(rows, "rows");
    if (dim == 0)
      throw std::invalid_argument("dimension must be positive");
    *out = new kb_sample{ Sample(dim, std::vector<double>(rows, rows + n * dim)) };
  });
}

kb_status kb_sample_read_csv(const char* path, kb_sample** out)
{
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new kb_sample{ read_sample_csv(std::string(path)) };
  });
}

void kb_sample_destroy(kb_sample* sample)
{
  delete sample;
}

size_t kb_sample_size(const kb_sample* sample)
{
  return sample ? sample->value.size() : 0;
}

size_t kb_sample_dimension(const kb_sample* sample)
{
  return sample ? sample->value.dimension() : 0;
}

const double* kb_sample_data(const kb_sample* sample)
{
  return sample ? sample->value.values().data() : nullptr;
}

kb_status kb_grid_create(size_t dim,
                         const double* lo,
                         const double* hi,
                         const double* step,
                         size_t step_count,
                         kb_grid** out)
{
  return guarded([&] {
    require(lo, "lo");
    require(hi, "hi");
    require(step, "step");
    require(out, "out");
    std::vector<Interval> region;
    for (size_t i = 0; i < dim; ++i)
      region.push_back({ lo[i], hi[i] });
    auto grid = std::make_shared<const EvaluationGrid>(
      std::move(region), std::vector<double>(step, step + step_count));
    *out = new kb_grid{ std::move(grid) };
  });
}

void kb_grid_destroy(kb_grid* grid)
{
  delete grid;
}

size_t kb_grid_size(const kb_grid* grid)
{
  return grid ? grid->value->size() : 0;
}

size_t kb_grid_dimension(const kb_grid* grid)
{
  return grid ? grid->value->dimension() : 0;
}

kb_status kb_grid_point(const kb_grid* grid, size_t index, double* out)
{
  return guarded([&] {
    require(grid, "grid");
    require(out, "out");
    if (index >= grid->value->size())
      throw std::invalid_argument("grid index out of range");
    auto p = grid->value->point(index);
    std::copy(p.begin(), p.end(), out);
  });
}

kb_status kb_kde_at_point(const kb_sample* sample,
                          const kb_kernel* kernel,
                          double h,
                          const double* x,
                          size_t dim,
                          double* out)
{
  return guarded([&] {
    require(sample, "sample");
    require(kernel, "kernel");
    require(x, "x");
    require(out, "out");
    *out = kde_at_point(sample->value, kernel->value, h, std::span<const double>(x, dim));
  });
}

kb_status kb_kde_on_grid(const kb_sample* sample,
                         const kb_kernel* kernel,
                         double h,
                         const kb_grid* grid,
                         kb_estimate** out)
{
  return guarded([&] {
    require(sample, "sample");
    require(kernel, "kernel");
    require(grid, "grid");
    require(out, "out");
    *out = new kb_estimate{ kde_on_grid(sample->value, kernel->value, h, grid->value) };
  });
}

void kb_estimate_destroy(kb_estimate* estimate)
{
  delete estimate;
}

size_t kb_estimate_size(const kb_estimate* estimate)
{
  return estimate ? estimate->value.values.size() : 0;
}

const double* kb_estimate_values(const kb_estimate* estimate)
{
  return estimate ? estimate->value.values.data() : nullptr;
}

double kb_estimate_bandwidth(const kb_estimate* estimate)
{
  return estimate ? estimate->value.bandwidth : std::nan("");
}

kb_status kb_estimate_sup(const kb_estimate* estimate, size_t* index, double* value)
{
  return guarded([&] {
    require(estimate, "estimate");
    auto m = sup_on_grid(estimate->value);
    if (index)
      *index = m.index;
    if (value)
      *value = m.value;
  });
}

kb_status kb_estimate_write_csv(const kb_estimate* estimate, const char* path)
{
  return guarded([&] {
    require(estimate, "estimate");
    require(path, "path");
    std::ofstream out(path);
    if (!out)
      throw std::ios_base::failure(std::string("cannot open ") + path);
    write_estimate_csv(out, estimate->value);
  });
}

// ---- rates and schedules ----

kb_status kb_rate_parse(const char* text, kb_rate* out)
{
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = to_c(parse_rate(text));
  });
}

kb_status kb_rate_format(kb_rate rate, char** out)
{
  return guarded([&] {
    require(out, "out");
    *out = copy_string(format_rate(to_cpp(rate)));
  });
}

kb_status kb_rate_eval(kb_rate rate, double n, double* out)
{
  return guarded([&] {
    require(out, "out");
    *out = rate_eval(to_cpp(rate), n);
  });
}

kb_limit_class kb_rate_limit_class(kb_rate rate)
{
  switch (limit_class(to_cpp(rate))) {
    case LimitClass::to_zero: return KB_LIMIT_TO_ZERO;
    case LimitClass::to_infinity: return KB_LIMIT_TO_INFINITY;
    case LimitClass::bounded_positive: break;
  }
  return KB_LIMIT_BOUNDED;
}

kb_preset_params kb_preset_params_default(void)
{
  return { std::nan(""), std::nan(""), 1.0, 1.0, 1.0, 0 };
}

kb_status kb_schedule_preset(const char* name,
                             size_t dim,
                             const kb_preset_params* params,
                             kb_schedule** out)
{
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    PresetParams p;
    if (params) {
      if (!std::isnan(params->a))
        p.a = params->a;
      if (!std::isnan(params->e))
        p.e = params->e;
      p.c_star = params->c_star;
      p.v_star = params->v_star;
      p.eps_star = params->eps_star;
      p.h_log_variant = params->h_log_variant != 0;
    }
    *out = new kb_schedule{ preset(name, p, dim) };
  });
}

kb_status kb_schedule_from_rates(size_t dim,
                                 kb_rate h,
                                 kb_rate h_star,
                                 kb_rate v,
                                 kb_rate eps,
                                 kb_schedule** out)
{
  return guarded([&] {
    require(out, "out");
    if (dim == 0)
      throw std::invalid_argument("dimension must be positive");
    *out = new kb_schedule{ ScheduleSet{ to_cpp(h), to_cpp(h_star), to_cpp(v), to_cpp(eps), dim } };
  });
}

void kb_schedule_destroy(kb_schedule* schedule)
{
  delete schedule;
}

size_t kb_schedule_dimension(const kb_schedule* schedule)
{
  return schedule ? schedule->value.dim : 0;
}

void kb_schedule_rates(const kb_schedule* schedule,
                       kb_rate* h,
                       kb_rate* h_star,
                       kb_rate* v,
                       kb_rate* eps)
{
  if (!schedule)
    return;
  if (h)
    *h = to_c(schedule->value.h);
  if (h_star)
    *h_star = to_c(schedule->value.h_star);
  if (v)
    *v = to_c(schedule->value.v);
  if (eps)
    *eps = to_c(schedule->value.eps);
}

kb_status kb_schedule_check(const kb_schedule* schedule, int conditions, int* holds, char** json)
{
  return guarded([&] {
    require(schedule, "schedule");
    if (conditions == 0 || (conditions & ~KB_CONDITION_ALL) != 0)
      throw std::invalid_argument("conditions must be a nonempty combination of kb_condition flags");
    const auto& s = schedule->value;
    std::vector<ConditionReport> reports;
    if (conditions & KB_CONDITION_THEOREM1)
      reports.push_back(check_theorem1_conditions(s));
    if (conditions & KB_CONDITION_THEOREM2)
      reports.push_back(check_theorem2_conditions(s));
    if (conditions & KB_CONDITION_TRUNCATION)
      reports.push_back(check_truncation_conditions(s));
    if (conditions & KB_CONDITION_TRANSLATION) {
      // With every set requested, translation is reported where it applies.
      if (s.dim == 1 || conditions != KB_CONDITION_ALL)
        reports.push_back(check_translation_conditions(s));
    }
    bool all = true;
    for (const auto& r : reports)
      all = all && r.holds();
    if (holds)
      *holds = all ? 1 : 0;
    if (json)
      *json = copy_string(conditions_json(s, reports));
  });
}

// ---- bands ----

kb_status kb_band_family_parse(const char* name, kb_band_family* out)
{
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = static_cast<kb_band_family>(parse_band_family(name));
  });
}

kb_status kb_truncation_parse(const char* name, kb_truncation* out)
{
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = static_cast<kb_truncation>(parse_truncation(name));
  });
}

kb_status kb_z_alpha(double alpha, double* out)
{
  return guarded([&] {
    require(out, "out");
    *out = z_alpha(alpha);
  });
}

kb_status kb_u_n(const kb_kernel* kernel, double c1, double c2, double h, double* out)
{
  return guarded([&] {
    require(kernel, "kernel");
    require(out, "out");
    *out = u_n(kernel->value, Interval{ c1, c2 }, h);
  });
}

kb_status kb_band_build(const kb_band_spec* spec,
                        const kb_kernel* kernel,
                        const kb_schedule* schedule,
                        const kb_estimate* fstar,
                        const kb_estimate* fn,
                        kb_band** out)
{
  return guarded([&] {
    require(spec, "spec");
    require(kernel, "kernel");
    require(schedule, "schedule");
    require(fstar, "fstar");
    require(fn, "fn");
    require(out, "out");
    *out = new kb_band{ build_band(
      to_cpp(*spec), kernel->value, schedule->value, fstar->value, fn->value) };
  });
}

void kb_band_destroy(kb_band* band)
{
  delete band;
}

size_t kb_band_size(const kb_band* band)
{
  return band ? band->value.intervals.size() : 0;
}

kb_status kb_band_interval(const kb_band* band,
                           size_t index,
                           double* center,
                           double* half_width,
                           int* truncated)
{
  return guarded([&] {
    require(band, "band");
    if (index >= band->value.intervals.size())
      throw std::invalid_argument("band index out of range");
    const auto& iv = band->value.intervals[index];
    if (center)
      *center = iv.center;
    if (half_width)
      *half_width = iv.half_width;
    if (truncated)
      *truncated = band->value.truncation_triggered[index];
  });
}

kb_status kb_band_contains(const kb_band* band,
                           const double* truth,
                           size_t count,
                           int* contained,
                           size_t* first_violation)
{
  return guarded([&] {
    require(band, "band");
    require(truth, "truth");
    require(contained, "contained");
    auto c = band_contains(band->value, std::span<const double>(truth, count));
    *contained = c.contained ? 1 : 0;
    if (first_violation && c.first_violation)
      *first_violation = *c.first_violation;
  });
}

kb_status kb_band_write_csv(const kb_band* band, const char* path)
{
  return guarded([&] {
    require(band, "band");
    require(path, "path");
    std::ofstream out(path);
    if (!out)
      throw std::ios_base::failure(std::string("cannot open ") + path);
    write_band_csv(out, band->value);
  });
}

kb_status kb_band_summary_json(const kb_band* band, char** json)
{
  return guarded([&] {
    require(band, "band");
    require(json, "json");
    *json = copy_string(band_summary_json(band->value));
  });
}

// ---- coverage ----

kb_status kb_density_create(const char* name, size_t dim, kb_density** out)
{
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new kb_density{ TrueDensity::builtin(name, dim) };
  });
}

void kb_density_destroy(kb_density* density)
{
  delete density;
}

kb_status kb_density_evaluate(const kb_density* density, const double* x, size_t dim, double* out)
{
  return guarded([&] {
    require(density, "density");
    require(x, "x");
    require(out, "out");
    *out = density->value(std::span<const double>(x, dim));
  });
}

kb_status kb_density_sample(const kb_density* density, uint64_t seed, size_t n, kb_sample** out)
{
  return guarded([&] {
    require(density, "density");
    require(out, "out");
    Engine rng(stream_seed(seed, n, 0));
    *out = new kb_sample{ density->value.sample(rng, n) };
  });
}

uint64_t kb_stream_seed(uint64_t master, uint64_t n, uint64_t rep)
{
  return stream_seed(master, n, rep);
}

kb_status kb_simulate(const kb_simulation_config* config, kb_report** out)
{
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = new kb_report{ simulate_noncoverage(to_cpp(*config)) };
  });
}

void kb_report_destroy(kb_report* report)
{
  delete report;
}

size_t kb_report_size(const kb_report* report)
{
  return report ? report->value.entries.size() : 0;
}

kb_status kb_report_entry(const kb_report* report, size_t index, kb_coverage_entry* out)
{
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    if (index >= report->value.entries.size())
      throw std::invalid_argument("report index out of range");
    const auto& e = report->value.entries[index];
    *out = { e.n, e.replications, e.misses, e.phat, e.se, e.w_n };
  });
}

kb_status kb_report_fit(const kb_report* report, kb_correction correction, kb_log_level_fit* out)
{
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    *out = to_c(fit_log_level(report->value, to_cpp(correction)));
  });
}

kb_status kb_report_json(const kb_report* report, kb_correction correction, char** json)
{
  return guarded([&] {
    require(report, "report");
    require(json, "json");
    *json = copy_string(coverage_report_json(report->value, to_cpp(correction)));
  });
}

kb_status kb_fit_log_level(const double* w, const double* p, size_t count, kb_log_level_fit* out)
{
  return guarded([&] {
    require(w, "w");
    require(p, "p");
    require(out, "out");
    *out = to_c(fit_log_level(std::span<const double>(w, count), std::span<const double>(p, count)));
  });
}

kb_status kb_almost_sure_study(const kb_simulation_config* config,
                               size_t paths,
                               size_t beyond,
                               double* fraction_clean,
                               char** json)
{
  return guarded([&] {
    require(config, "config");
    auto cfg = to_cpp(*config);
    auto study = almost_sure_study(cfg, paths, beyond);
    if (fraction_clean)
      *fraction_clean = study.fraction_clean;
    if (json)
      *json = copy_string(almost_sure_json(cfg, study));
  });
}

} // extern "C"
