#include "tetimp/stats_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tetimp/errors.hpp"

namespace tetimp {

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json stats_json(const QualityStats& s) {
  return {{"n_tets", s.n_tets},
          {"n_vertices", s.n_vertices},
          {"min_dihedral_deg", s.min_dihedral_deg},
          {"max_dihedral_deg", s.max_dihedral_deg},
          {"mean_dihedral_deg", s.mean_dihedral_deg},
          {"stddev_dihedral_deg", s.stddev_dihedral_deg},
          {"min_aspect", s.min_aspect},
          {"max_aspect", s.max_aspect},
          {"mean_aspect", s.mean_aspect},
          {"energy", s.energy},
          {"histogram", s.histogram}};
}

} // namespace

std::string stats_csv(
    const std::vector<std::pair<std::string, QualityStats>>& rows) {
  std::ostringstream out;
  out << "label,n_tets,n_vertices,min_dihedral_deg,max_dihedral_deg,"
         "mean_dihedral_deg,stddev_dihedral_deg,min_aspect,max_aspect,"
         "mean_aspect,energy";
  for (int b = 0; b < kHistogramBins; ++b) out << ",hist_" << 5 * b;
  out << '\n';
  for (const auto& [label, s] : rows) {
    out << csv_quote(label) << ',' << s.n_tets << ',' << s.n_vertices << ','
        << num(s.min_dihedral_deg) << ',' << num(s.max_dihedral_deg) << ','
        << num(s.mean_dihedral_deg) << ',' << num(s.stddev_dihedral_deg) << ','
        << num(s.min_aspect) << ',' << num(s.max_aspect) << ','
        << num(s.mean_aspect) << ',' << num(s.energy);
    for (long h : s.histogram) out << ',' << h;
    out << '\n';
  }
  return out.str();
}

void write_stats_csv(
    const std::string& path,
    const std::vector<std::pair<std::string, QualityStats>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << stats_csv(rows);
}

std::string report_json(const ImproveReport& report) {
  nlohmann::json j;
  j["initial"] = stats_json(report.initial);
  j["final"] = stats_json(report.final_stats);
  j["outer_iterations"] = report.outer_iterations;
  j["termination"] = to_string(report.termination);
  j["phases"] = nlohmann::json::array();
  for (const auto& p : report.phases)
    j["phases"].push_back({{"outer", p.outer},
                           {"phase", p.phase},
                           {"rounds", p.rounds},
                           {"operations", p.operations}});
  j["flip_passes"] = nlohmann::json::array();
  for (const auto& l : report.lazy)
    j["flip_passes"].push_back(
        {{"outer", l.outer},
         {"criterion", l.criterion == FlipMode::MinMaxDihedral
                           ? "min_max_dihedral"
                           : "aspect_ratio"},
         {"q_before", l.q_before},
         {"q_after", l.q_after},
         {"removals", l.removals}});
  return j.dump(2) + "\n";
}

void write_report_json(const std::string& path, const ImproveReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << report_json(report);
}

std::string flip_trace_csv(const std::vector<FlipTraceRow>& rows) {
  std::string out = "a,b,level,accepted,objective_before,objective_after\n";
  char buf[64];
  for (const FlipTraceRow& r : rows) {
    out += std::to_string(r.a) + ',' + std::to_string(r.b) + ',' +
           std::to_string(r.level) + ',' + (r.accepted ? "1," : "0,");
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r.objective_before,
                  r.objective_after);
    out += buf;
  }
  return out;
}

void write_flip_trace_csv(const std::string& path,
                          const std::vector<FlipTraceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << flip_trace_csv(rows);
}

} // namespace tetimp
