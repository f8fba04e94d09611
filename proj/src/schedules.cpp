#include "kdeband/schedules.hpp"
#include "kdeband/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace kdeband {

double RateSequence::operator()(double n) const
{
  return rate_eval(*this, n);
}

double rate_eval(const RateSequence& seq, double n)
{
  if (!(n >= 3.0))
    throw std::domain_error("rate sequences are evaluated for n >= 3");
  double log_n = std::log(n);
  double value = seq.coefficient * std::pow(n, seq.n_exponent);
  if (seq.log_exponent != 0.0)
    value *= std::pow(log_n, seq.log_exponent);
  if (seq.loglog_exponent != 0.0)
    value *= std::pow(std::log(log_n), seq.loglog_exponent);
  return value;
}

RateSequence operator*(const RateSequence& a, const RateSequence& b)
{
  return { a.coefficient * b.coefficient,
           a.n_exponent + b.n_exponent,
           a.log_exponent + b.log_exponent,
           a.loglog_exponent + b.loglog_exponent };
}

RateSequence operator/(const RateSequence& a, const RateSequence& b)
{
  return a * pow(b, -1.0);
}

RateSequence pow(const RateSequence& seq, double power)
{
  return { std::pow(seq.coefficient, power),
           seq.n_exponent * power,
           seq.log_exponent * power,
           seq.loglog_exponent * power };
}

RateSequence n_power(double s)
{
  return { 1.0, s, 0.0, 0.0 };
}

RateSequence constant(double c)
{
  return { c, 0.0, 0.0, 0.0 };
}

RateSequence rate_combine(const std::vector<std::pair<RateSequence, double>>& factors,
                          double n_exponent)
{
  RateSequence out = n_power(n_exponent);
  for (const auto& [seq, power] : factors)
    out = out * pow(seq, power);
  return out;
}

RateSequence log_inverse(const RateSequence& h)
{
  if (!(h.n_exponent < -exponent_tolerance))
    throw std::invalid_argument("bandwidth " + format_rate(h) +
                                " must decay polynomially to 0 (n exponent < 0)");
  return { -h.n_exponent, 0.0, 1.0, 0.0 };
}

std::string_view to_string(LimitClass c)
{
  switch (c) {
    case LimitClass::to_zero:
      return "->0";
    case LimitClass::to_infinity:
      return "->inf";
    case LimitClass::bounded_positive:
      return "bounded";
  }
  return "?";
}

LimitClass limit_class(const RateSequence& seq)
{
  for (double e : { seq.n_exponent, seq.log_exponent, seq.loglog_exponent }) {
    if (e > exponent_tolerance)
      return LimitClass::to_infinity;
    if (e < -exponent_tolerance)
      return LimitClass::to_zero;
  }
  return LimitClass::bounded_positive;
}

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::string_view whole)
{
  s = trim(s);
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("cannot parse number '" + std::string(s) + "' in rate '" +
                                std::string(whole) + "'");
  return value;
}

} // namespace

RateSequence parse_rate(std::string_view text)
{
  RateSequence out;
  std::string_view rest = text;
  if (trim(rest).empty())
    throw std::invalid_argument("empty rate expression");
  while (true) {
    auto star = rest.find('*');
    auto factor = trim(rest.substr(0, star));
    if (factor.empty())
      throw std::invalid_argument("empty factor in rate '" + std::string(text) + "'");

    auto caret = factor.find('^');
    auto base = trim(factor.substr(0, caret));
    double power = 1.0;
    if (caret != std::string_view::npos)
      power = parse_number(factor.substr(caret + 1), text);

    if (base == "n") {
      out.n_exponent += power;
    } else if (base == "log") {
      out.log_exponent += power;
    } else if (base == "loglog") {
      out.loglog_exponent += power;
    } else {
      double c = parse_number(base, text);
      out.coefficient *= std::pow(c, power);
    }
    if (star == std::string_view::npos)
      break;
    rest = rest.substr(star + 1);
  }
  if (!(out.coefficient > 0.0) || !std::isfinite(out.coefficient))
    throw std::invalid_argument("rate coefficient must be positive in '" + std::string(text) +
                                "'");
  return out;
}

std::string format_rate(const RateSequence& seq)
{
  std::string out;
  auto append = [&](const std::string& s) {
    if (!out.empty())
      out += "*";
    out += s;
  };
  if (seq.coefficient != 1.0)
    append(format_double(seq.coefficient));
  if (seq.n_exponent != 0.0)
    append("n^" + format_double(seq.n_exponent));
  if (seq.log_exponent != 0.0)
    append("log^" + format_double(seq.log_exponent));
  if (seq.loglog_exponent != 0.0)
    append("loglog^" + format_double(seq.loglog_exponent));
  if (out.empty())
    out = "1";
  return out;
}

std::string_view to_string(Verdict v)
{
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::boundary:
      return "boundary";
  }
  return "?";
}

bool ConditionReport::holds() const
{
  for (const auto& l : limits) {
    if (l.required_for_condition && l.verdict != Verdict::holds)
      return false;
  }
  return true;
}

namespace {

LimitCheck make_check(std::string name,
                      const RateSequence& seq,
                      LimitClass required,
                      bool required_for_condition = true)
{
  LimitClass actual = limit_class(seq);
  Verdict verdict = Verdict::fails;
  if (actual == required)
    verdict = Verdict::holds;
  else if (actual == LimitClass::bounded_positive)
    verdict = Verdict::boundary;
  return { std::move(name), seq, required, actual, verdict, required_for_condition };
}

void check_dimension(const ScheduleSet& s)
{
  if (s.dim == 0)
    throw std::invalid_argument("schedule dimension must be positive");
}

// n h*^d / v^2
RateSequence speed(const ScheduleSet& s)
{
  double d = static_cast<double>(s.dim);
  return rate_combine({ { s.h_star, d }, { s.v, -2.0 } }, 1.0);
}

std::vector<LimitCheck> common_limits(const ScheduleSet& s, bool strengthened)
{
  double d = static_cast<double>(s.dim);
  RateSequence log_inv_hstar = log_inverse(s.h_star);
  std::vector<LimitCheck> out;
  out.push_back(make_check("v -> inf", s.v, LimitClass::to_infinity));
  if (strengthened) {
    out.push_back(make_check("n h*^d / (v^2 log(1/h*)) -> inf",
                             speed(s) / log_inv_hstar,
                             LimitClass::to_infinity));
  } else {
    out.push_back(make_check("n h*^d / v^2 -> inf", speed(s), LimitClass::to_infinity));
  }
  out.push_back(make_check(
    "v h*^2 -> 0", rate_combine({ { s.v, 1.0 }, { s.h_star, 2.0 } }), LimitClass::to_zero));
  out.push_back(make_check("v^2 h^d / h*^d -> inf",
                           rate_combine({ { s.v, 2.0 }, { s.h, d }, { s.h_star, -d } }),
                           LimitClass::to_infinity));
  return out;
}

} // namespace

ConditionReport check_theorem1_conditions(const ScheduleSet& s)
{
  check_dimension(s);
  ConditionReport report{ "theorem1", common_limits(s, false) };
  report.limits.push_back(make_check("almost sure: n h*^d / (v^2 log(1/h*)) -> inf",
                                     speed(s) / log_inverse(s.h_star),
                                     LimitClass::to_infinity,
                                     false));
  return report;
}

ConditionReport check_theorem2_conditions(const ScheduleSet& s)
{
  check_dimension(s);
  return { "theorem2", common_limits(s, true) };
}

ConditionReport check_truncation_conditions(const ScheduleSet& s)
{
  check_dimension(s);
  double d = static_cast<double>(s.dim);
  RateSequence log_inv_hstar = log_inverse(s.h_star);
  ConditionReport r{ "truncation", {} };
  r.limits.push_back(make_check("eps -> 0", s.eps, LimitClass::to_zero));
  r.limits.push_back(make_check("h* / eps -> 0", s.h_star / s.eps, LimitClass::to_zero));
  r.limits.push_back(make_check("h^2 / eps -> 0", pow(s.h, 2.0) / s.eps, LimitClass::to_zero));
  r.limits.push_back(
    make_check("v eps^(3/2) -> inf", s.v * pow(s.eps, 1.5), LimitClass::to_infinity));
  r.limits.push_back(make_check("v h*^2 / sqrt(eps) -> 0",
                                rate_combine({ { s.v, 1.0 }, { s.h_star, 2.0 }, { s.eps, -0.5 } }),
                                LimitClass::to_zero));
  r.limits.push_back(make_check("n h*^d / (v^2 log(1/h*)) -> inf",
                                speed(s) / log_inv_hstar,
                                LimitClass::to_infinity));
  r.limits.push_back(make_check(
    "v^2 h^d eps^2 / h*^d -> inf",
    rate_combine({ { s.v, 2.0 }, { s.h, d }, { s.eps, 2.0 }, { s.h_star, -d } }),
    LimitClass::to_infinity));
  return r;
}

ConditionReport check_translation_conditions(const ScheduleSet& s)
{
  if (s.dim != 1)
    throw std::invalid_argument("translation conditions are stated for d = 1");
  log_inverse(s.h);
  log_inverse(s.h_star);
  ConditionReport r{ "translation", {} };
  // With h = n^{-a}: n^a = 1/h and n^{1-a} = n h.
  r.limits.push_back(make_check("n^a h* -> inf", s.h_star / s.h, LimitClass::to_infinity));
  r.limits.push_back(make_check("n^(1-a) h*^4 / log n -> 0",
                                rate_combine({ { s.h, 1.0 },
                                               { s.h_star, 4.0 },
                                               { RateSequence{ 1.0, 0.0, 1.0, 0.0 }, -1.0 } },
                                             1.0),
                                LimitClass::to_zero));
  return r;
}

namespace {

double require(const std::optional<double>& value, std::string_view name, std::string_view preset)
{
  if (!value)
    throw std::invalid_argument("preset " + std::string(preset) + " needs parameter " +
                                std::string(name));
  if (!std::isfinite(*value))
    throw std::invalid_argument("parameter " + std::string(name) + " must be finite");
  return *value;
}

void check_open(double value,
                double lower,
                double upper,
                std::string_view name,
                std::string_view bounds,
                PresetCheck check)
{
  if (check == PresetCheck::skip)
    return;
  if (!(value > lower && value < upper))
    throw std::domain_error(std::string(name) + " must lie in " + std::string(bounds) +
                            ", got " + format_double(value));
}

void check_positive(double value, std::string_view name, PresetCheck check)
{
  if (check == PresetCheck::enforce && !(value > 0.0))
    throw std::domain_error(std::string(name) + " must be positive, got " + format_double(value));
}

} // namespace

std::vector<std::string> preset_names()
{
  return { "bickel_rosenblatt", "translated", "thinner_mse", "thinner_sup" };
}

ScheduleSet preset(std::string_view name,
                   const PresetParams& params,
                   std::size_t dim,
                   PresetCheck check)
{
  if (dim == 0)
    throw std::invalid_argument("dimension must be positive");
  const double d = static_cast<double>(dim);
  ScheduleSet s;
  s.dim = dim;
  check_positive(params.c_star, "c*", check);
  check_positive(params.v_star, "v*", check);
  check_positive(params.eps_star, "eps*", check);

  if (name == "bickel_rosenblatt" || name == "translated") {
    double a = require(params.a, "a", name);
    double e = params.e.value_or(0.5);
    if (name == "bickel_rosenblatt") {
      if (dim != 1 && check == PresetCheck::enforce)
        throw std::domain_error("bickel_rosenblatt is defined for d = 1 only");
      check_open(a, 0.2, 0.5, "a", "(1/5, 1/2)", check);
    } else if (dim == 1) {
      check_open(a, 0.2, 0.5, "a", "(1/5, 1/2)", check);
    } else {
      check_open(a,
                 1.0 / (d + 4.0),
                 (d + 4.0) / (d * (d + 8.0)),
                 "a",
                 "(1/(d+4), (d+4)/(d(d+8)))",
                 check);
    }
    check_open(e, 0.0, 1.0, "e", "(0, 1)", check);
    s.h = { 1.0, -a, 0.0, 0.0 };
    s.h_star = name == "bickel_rosenblatt" ? s.h : RateSequence{ 1.0, -(1.0 - a * d) / 4.0, 0.0, 0.0 };
    // v = sqrt(n h^d / log(1/h)) with log(1/h) = a log n.
    s.v = { 1.0 / std::sqrt(a), (1.0 - a * d) / 2.0, -0.5, 0.0 };
    s.eps = { params.eps_star, 0.0, -e, 0.0 };
    return s;
  }

  if (name == "thinner_mse") {
    double a = require(params.a, "a", name);
    double e = params.e.value_or(a);
    check_open(a, 0.5, INFINITY, "a", "(1/2, inf)", check);
    check_open(e, 0.0, 2.0 * a, "e", "(0, 2a)", check);
    s.h_star = { params.c_star, -1.0 / (d + 4.0), 0.0, 0.0 };
    s.h = params.h_log_variant ? RateSequence{ params.c_star, -1.0 / (d + 4.0), 1.0 / (d + 4.0), 0.0 }
                               : s.h_star;
    s.v = { params.v_star, 2.0 / (d + 4.0), -a, 0.0 };
    s.eps = { params.eps_star, 0.0, -e, 0.0 };
    return s;
  }

  if (name == "thinner_sup") {
    double a = require(params.a, "a", name);
    double e = params.e.value_or(a);
    check_open(a, 0.0, INFINITY, "a", "(0, inf)", check);
    check_open(e, 0.0, 2.0 * a, "e", "(0, 2a)", check);
    // [n / log n]^{-1/(d+4)}
    s.h_star = { params.c_star, -1.0 / (d + 4.0), 1.0 / (d + 4.0), 0.0 };
    s.h = s.h_star;
    s.v = { params.v_star, 2.0 / (d + 4.0), -2.0 / (d + 4.0), -a };
    s.eps = { params.eps_star, 0.0, 0.0, -e };
    return s;
  }

  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

} // namespace kdeband
