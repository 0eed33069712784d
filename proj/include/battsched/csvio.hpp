#pragma once

#include <string>
#include <vector>

#include "battsched/env.hpp"
#include "battsched/timeseries.hpp"

// File formats (UTF-8, '.' decimal separator, shortest round-trip floats):
//
//   buildings CSV : header `hour,building,load_kwh,pv_kwh`, rows sorted by
//                   (building, hour).
//   district CSV  : header `hour,price,carbon`.
//   archive CSV   : header `origin,target,scenario,value`, rows sorted by
//                   (origin, scenario, target); point archives use
//                   scenario 0 only.

namespace battsched::csvio {

// Shortest representation that parses back to the identical double.
std::string format_double(double v);

void write_environment(const EnvironmentSeries& env,
                       const std::string& buildings_path,
                       const std::string& district_path);

// Battery specs come from configuration, one per building in file order.
EnvironmentSeries read_environment(const std::string& buildings_path,
                                   const std::string& district_path,
                                   const std::vector<BatterySpec>& batteries);

void write_archive(const ForecastArchive& archive, const std::string& path);

ForecastArchive read_archive(const std::string& path, ForecastKind expected);

}  // namespace battsched::csvio
