#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kdeband {

//! c * n^p * (log n)^q * (log log n)^r, defined for n >= 3.
struct RateSequence
{
  double coefficient{ 1.0 };
  double n_exponent{ 0.0 };
  double log_exponent{ 0.0 };
  double loglog_exponent{ 0.0 };

  double operator()(double n) const;
  bool operator==(const RateSequence&) const = default;
};

//! Exponents closer to zero than this are treated as zero when deciding
//! limits, so that e.g. 1 - 0.2 - 0.8 counts as an exact cancellation.
inline constexpr double exponent_tolerance = 1e-9;

//! Throws std::domain_error for n < 3 (log log n must be positive).
double rate_eval(const RateSequence& seq, double n);

RateSequence operator*(const RateSequence& a, const RateSequence& b);
RateSequence operator/(const RateSequence& a, const RateSequence& b);
RateSequence pow(const RateSequence& seq, double power);
//! n^s
RateSequence n_power(double s);
RateSequence constant(double c);

//! prod_i factors[i].first ^ factors[i].second, times n^s.
RateSequence rate_combine(const std::vector<std::pair<RateSequence, double>>& factors,
                          double n_exponent = 0.0);

//! log(1 / h) to leading order, for h decaying polynomially: b log n where
//! b = -p. Throws std::invalid_argument unless p < 0.
RateSequence log_inverse(const RateSequence& h);

enum class LimitClass
{
  to_zero,
  to_infinity,
  bounded_positive
};

std::string_view to_string(LimitClass c);

//! Lexicographic decision on (p, q, r).
LimitClass limit_class(const RateSequence& seq);

//! Grammar: factor ('*' factor)*, factor := number | 'n' ['^' number]
//! | 'log' ['^' number] | 'loglog' ['^' number]. Throws
//! std::invalid_argument with the offending position.
RateSequence parse_rate(std::string_view text);
//! Canonical "c*n^p*log^q*loglog^r" with shortest round-trip numbers and
//! zero exponents omitted. parse_rate(format_rate(s)) == s.
std::string format_rate(const RateSequence& seq);

//! Bandwidths h_n (variance proxy f_n) and h*_n (center f*_n), the
//! normalisation v_n, the truncation level eps_n, and the dimension.
struct ScheduleSet
{
  RateSequence h;
  RateSequence h_star;
  RateSequence v;
  RateSequence eps;
  std::size_t dim{ 1 };
};

enum class Verdict
{
  holds,
  fails,
  boundary
};

std::string_view to_string(Verdict v);

struct LimitCheck
{
  std::string name;
  RateSequence sequence;
  LimitClass required;
  LimitClass actual;
  Verdict verdict;
  //! Part of the condition set (false for addenda reported alongside).
  bool required_for_condition{ true };
};

struct ConditionReport
{
  std::string condition;
  std::vector<LimitCheck> limits;

  //! All required limits hold.
  bool holds() const;
};

//! Basic conditions: v -> inf, n h*^d / v^2 -> inf, v h*^2 -> 0,
//! v^2 h^d / h*^d -> inf; plus the almost-sure addendum
//! n h*^d / (v^2 log(1/h*)) -> inf, reported as non-required.
ConditionReport check_theorem1_conditions(const ScheduleSet& s);
//! Stronger conditions: the basic set with the first limit strengthened.
ConditionReport check_theorem2_conditions(const ScheduleSet& s);
//! The seven limits under which truncated bands keep their level.
ConditionReport check_truncation_conditions(const ScheduleSet& s);
//! Conditions on h* for translated bands, h = n^{-a}, d = 1:
//! n^a h* -> inf and n^{1-a} h*^4 / log n -> 0.
ConditionReport check_translation_conditions(const ScheduleSet& s);

struct PresetParams
{
  std::optional<double> a;
  std::optional<double> e;
  double c_star{ 1.0 };
  double v_star{ 1.0 };
  double eps_star{ 1.0 };
  //! thinner_mse only: h = c* [n / log n]^{-1/(d+4)} instead of h = h*.
  bool h_log_variant{ false };
};

enum class PresetCheck
{
  enforce,
  skip
};

//! Named schedules: "bickel_rosenblatt", "translated", "thinner_mse",
//! "thinner_sup". Parameters outside their admissible open intervals are
//! rejected with std::domain_error naming the violated bound unless
//! `check` is PresetCheck::skip.
ScheduleSet preset(std::string_view name,
                   const PresetParams& params,
                   std::size_t dim = 1,
                   PresetCheck check = PresetCheck::enforce);

std::vector<std::string> preset_names();

} // namespace kdeband
