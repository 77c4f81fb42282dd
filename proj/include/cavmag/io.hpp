// Output writers: time-series CSV / JSON with a reproducibility header (full
// resolved config plus master seed), long-format scan tables, and JSON
// reports.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cavmag/config.hpp"
#include "cavmag/timeseries.hpp"

namespace cavmag {

// CSV column order is fixed: t, deltaN, n1, n2, deltan, phase. Floats are
// written with 17 significant digits so identical runs give identical bytes.
void write_timeseries_csv(const std::string& path, const TimeSeries& ts,
                          const RunConfig& cfg, std::uint64_t seed);

// Same data as a JSON object with one array per column.
void write_timeseries_json(const std::string& path, const TimeSeries& ts,
                           const RunConfig& cfg, std::uint64_t seed);

// Dispatches on cfg.output.format.
void write_timeseries(const std::string& path_base, const TimeSeries& ts,
                      const RunConfig& cfg, std::uint64_t seed);

// Long format: one block per scan value, keyed by a leading parameter column.
void write_scan_csv(const std::string& path, const std::string& param,
                    const std::vector<double>& values,
                    const std::vector<TimeSeries>& series, const RunConfig& cfg,
                    std::uint64_t seed);

// report_json must already be a serialized JSON object; it is wrapped with
// the config text and seed.
void write_report(const std::string& path, const std::string& report_json,
                  const RunConfig& cfg, std::uint64_t seed);

std::string timeseries_csv_text(const TimeSeries& ts, const RunConfig& cfg,
                                std::uint64_t seed);

}  // namespace cavmag
