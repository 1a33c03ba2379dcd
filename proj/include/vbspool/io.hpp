// Text formats emitted by the command-line tool: sweep CSV, JSON summaries,
// trace CSV, and the metadata line every file starts with.
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "vbspool/analytic.hpp"
#include "vbspool/planner.hpp"
#include "vbspool/simulator.hpp"

namespace vbspool {

inline constexpr std::string_view kVersion = "0.1.0";

/// Twelve significant digits, %g style.
std::string format_number(double value);

/// Same value rounded to twelve significant digits, for JSON output.
double round_significant(double value);

/// Ordered parameter echo, e.g. {"command": "sweep", "m": "10", ...}.
using Metadata = std::map<std::string, std::string>;

/// `# vbspool <version> key=value ...`
std::string metadata_comment(const Metadata& metadata);
nlohmann::json metadata_json(const Metadata& metadata);

inline constexpr std::string_view kSweepCsvHeader = "n,normalized_n,p_radio,p_comp,p_total";

void write_sweep_csv(std::ostream& out, const SweepResult& sweep, const Metadata& metadata);
/// Skips '#' comment lines, expects the header, then one point per line.
std::vector<SweepPoint> read_sweep_csv(std::istream& in);

nlohmann::json sweep_summary_json(const SweepResult& sweep);
nlohmann::json blocking_json(const BlockingReport& report);
nlohmann::json estimate_json(const SimEstimate& estimate);

inline constexpr std::string_view kTraceCsvHeader = "time,event,vbs,total_occupancy";

/// Sink writing `time,event,vbs,total_occupancy` lines to `out`.
TraceSink trace_csv_sink(std::ostream& out);

} // namespace vbspool
