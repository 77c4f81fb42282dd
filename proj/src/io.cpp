#include "cavmag/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cavmag/errors.hpp"

namespace cavmag {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void header_comment(std::ostream& os, const RunConfig& cfg,
                    std::uint64_t seed) {
  os << "# cavity magnetometer run\n";
  os << "# seed: " << seed << "\n";
  os << "# config:\n";
  std::istringstream cfg_text(serialize_config(cfg));
  std::string line;
  while (std::getline(cfg_text, line)) os << "#   " << line << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  return out;
}

void append_rows(std::ostream& os, const TimeSeries& ts,
                 const std::string& prefix) {
  for (std::size_t i = 0; i < ts.t.size(); ++i) {
    os << prefix << fmt(ts.t[i]) << ',' << fmt(ts.deltaN[i]) << ','
       << fmt(ts.n1[i]) << ',' << fmt(ts.n2[i]) << ',' << fmt(ts.deltan[i])
       << ',' << fmt(ts.phase[i]) << '\n';
  }
}

nlohmann::ordered_json envelope(const RunConfig& cfg, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["config"] = serialize_config(cfg);
  return j;
}

}  // namespace

std::string timeseries_csv_text(const TimeSeries& ts, const RunConfig& cfg,
                                std::uint64_t seed) {
  std::ostringstream os;
  header_comment(os, cfg, seed);
  os << "t,deltaN,n1,n2,deltan,phase\n";
  append_rows(os, ts, "");
  return os.str();
}

void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          const RunConfig& cfg, std::uint64_t seed) {
  auto out = open_out(path);
  out << timeseries_csv_text(ts, cfg, seed);
}

void write_timeseries_json(const std::string& path, const TimeSeries& ts,
                           const RunConfig& cfg, std::uint64_t seed) {
  nlohmann::ordered_json j = envelope(cfg, seed);
  j["columns"] = {"t", "deltaN", "n1", "n2", "deltan", "phase"};
  j["t"] = ts.t;
  j["deltaN"] = ts.deltaN;
  j["n1"] = ts.n1;
  j["n2"] = ts.n2;
  j["deltan"] = ts.deltan;
  j["phase"] = ts.phase;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_timeseries(const std::string& path_base, const TimeSeries& ts,
                      const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.output.format == "json")
    write_timeseries_json(path_base + ".json", ts, cfg, seed);
  else
    write_timeseries_csv(path_base + ".csv", ts, cfg, seed);
}

void write_scan_csv(const std::string& path, const std::string& param,
                    const std::vector<double>& values,
                    const std::vector<TimeSeries>& series, const RunConfig& cfg,
                    std::uint64_t seed) {
  if (values.size() != series.size())
    throw ConfigError("write_scan_csv: value/series length mismatch");
  auto out = open_out(path);
  header_comment(out, cfg, seed);
  out << param << ",t,deltaN,n1,n2,deltan,phase\n";
  for (std::size_t k = 0; k < values.size(); ++k)
    append_rows(out, series[k], fmt(values[k]) + ",");
}

void write_report(const std::string& path, const std::string& report_json,
                  const RunConfig& cfg, std::uint64_t seed) {
  nlohmann::ordered_json j = envelope(cfg, seed);
  j["report"] = nlohmann::ordered_json::parse(report_json);
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace cavmag
