#pragma once

#include "kdeband/bands.hpp"
#include "kdeband/coverage.hpp"
#include "kdeband/kernels.hpp"
#include "kdeband/schedules.hpp"

#include <string>
#include <vector>

namespace kdeband {

// JSON renderings used by the C API and the CLI. All output is indented
// with two spaces and numbers use the shortest round-trip form, so equal
// inputs give byte-identical text.

std::string a1_report_json(const A1Report& report);

//! {"schedule": {...}, "reports": [{"condition", "holds", "limits": [...]}]}
std::string conditions_json(const ScheduleSet& schedule,
                            const std::vector<ConditionReport>& reports);

//! Family, parameters, max / min half-width and truncation trigger fraction.
std::string band_summary_json(const ConfidenceBand& band);

//! {"config", "entries": [{n, R, miss, phat, se, w_n}], "fit"}; "fit" is
//! null (with "fit_error") when no fit is possible.
std::string coverage_report_json(const CoverageReport& report, Correction correction);

std::string almost_sure_json(const SimulationConfig& config, const AlmostSureStudy& study);

} // namespace kdeband
