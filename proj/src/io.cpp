#include "vbspool/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vbspool {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

double round_significant(double value) {
    if (!std::isfinite(value)) return value;
    return std::stod(format_number(value));
}

std::string metadata_comment(const Metadata& metadata) {
    std::string line = "# vbspool " + std::string(kVersion);
    for (const auto& [key, value] : metadata) line += ' ' + key + '=' + value;
    return line;
}

nlohmann::json metadata_json(const Metadata& metadata) {
    nlohmann::json j = {{"tool", "vbspool"}, {"version", std::string(kVersion)}};
    for (const auto& [key, value] : metadata) j["parameters"][key] = value;
    return j;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep, const Metadata& metadata) {
    out << metadata_comment(metadata) << '\n' << kSweepCsvHeader << '\n';
    for (const auto& p : sweep.points) {
        out << p.n_comp << ',' << format_number(p.normalized_n) << ',' << format_number(p.p_radio)
            << ',' << format_number(p.p_comp) << ',' << format_number(p.p_total) << '\n';
    }
}

std::vector<SweepPoint> read_sweep_csv(std::istream& in) {
    std::vector<SweepPoint> points;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kSweepCsvHeader) throw std::invalid_argument("unexpected sweep CSV header");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 5) throw std::invalid_argument("sweep CSV row needs 5 fields: " + line);
        points.push_back({std::stoi(fields[0]), std::stod(fields[1]), std::stod(fields[2]),
                          std::stod(fields[3]), std::stod(fields[4])});
    }
    if (!header_seen) throw std::invalid_argument("sweep CSV has no header");
    return points;
}

nlohmann::json sweep_summary_json(const SweepResult& sweep) {
    const int top = sweep.m_vbs * sweep.k_radio;
    nlohmann::json j = {
        {"m", sweep.m_vbs},
        {"k", sweep.k_radio},
        {"a", sweep.load},
        {"p_threshold", sweep.p_threshold},
        {"n_max", top},
        {"n_min", sweep.n_min},
        {"normalized_n_min", round_significant(static_cast<double>(sweep.n_min) / top)},
        {"pooling_gain", round_significant(sweep.pooling_gain)},
        {"limit_lower", round_significant(sweep.limit_bounds.lower)},
        {"limit_upper", round_significant(sweep.limit_bounds.upper)},
        {"asymptote", round_significant(sweep.asymptote)},
    };
    if (sweep.points.size() >= 2) j["knee"] = knee_point(sweep);
    return j;
}

nlohmann::json blocking_json(const BlockingReport& report) {
    return {{"p_radio", round_significant(report.p_radio)},
            {"p_comp", round_significant(report.p_comp)},
            {"p_total", round_significant(report.p_total)},
            {"underflow", report.underflow}};
}

nlohmann::json estimate_json(const SimEstimate& estimate) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& r : estimate.per_replication) {
        reps.push_back({{"p_radio", round_significant(r.p_radio)},
                        {"p_comp", round_significant(r.p_comp)},
                        {"p_total", round_significant(r.p_total)},
                        {"offered", r.offered}});
    }
    const auto hw = [](double x) {
        return std::isfinite(x) ? nlohmann::json(round_significant(x)) : nlohmann::json(nullptr);
    };
    return {{"p_radio_hat", round_significant(estimate.p_radio_hat)},
            {"p_comp_hat", round_significant(estimate.p_comp_hat)},
            {"p_total_hat", round_significant(estimate.p_total_hat)},
            {"ci95_halfwidth",
             {{"p_radio", hw(estimate.ci_halfwidth.radio)},
              {"p_comp", hw(estimate.ci_halfwidth.comp)},
              {"p_total", hw(estimate.ci_halfwidth.total)}}},
            {"offered", estimate.offered},
            {"per_replication", reps}};
}

TraceSink trace_csv_sink(std::ostream& out) {
    return [&out](const TraceEvent& ev) {
        out << format_number(ev.time) << ',' << to_string(ev.kind) << ',' << ev.vbs << ','
            << ev.total_occupancy << '\n';
    };
}

} // namespace vbspool
