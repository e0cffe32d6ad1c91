#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tetimp/flips.hpp"
#include "tetimp/improve.hpp"
#include "tetimp/quality.hpp"

namespace tetimp {

// One CSV row per labeled snapshot; the trailing columns are the 5-degree
// dihedral histogram bins hist_0 .. hist_175.
std::string stats_csv(
    const std::vector<std::pair<std::string, QualityStats>>& rows);
void write_stats_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, QualityStats>>& rows);

// JSON summary of an improvement run: initial and final statistics, the
// per-phase and per-flip-pass records, and the termination reason.
std::string report_json(const ImproveReport& report);
void write_report_json(const std::string& path, const ImproveReport& report);

// One CSV row per attempted edge removal from a flip pass trace.
std::string flip_trace_csv(const std::vector<FlipTraceRow>& rows);
void write_flip_trace_csv(const std::string& path,
                          const std::vector<FlipTraceRow>& rows);

} // namespace tetimp
