#include "battsched/csvio.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace battsched::csvio {

namespace {

std::string row_msg(const std::string& path, std::size_t line,
                    const std::string& what) {
  return path + ":" + std::to_string(line) + ": " + what;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& path,
                    std::size_t line) {
  double v = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    fail(Errc::Format, row_msg(path, line, "bad number '" + s + "'"));
  if (!std::isfinite(v))
    fail(Errc::Format, row_msg(path, line, "non-finite value"));
  return v;
}

long long parse_int(const std::string& s, const std::string& path,
                    std::size_t line) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(Errc::Format, row_msg(path, line, "bad integer '" + s + "'"));
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Format, "cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::Format, "cannot write " + path);
  return out;
}

void expect_header(std::ifstream& in, const std::string& want,
                   const std::string& path) {
  std::string line;
  if (!std::getline(in, line))
    fail(Errc::Format, path + ": empty file");
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
    line.pop_back();
  if (line != want)
    fail(Errc::Format,
         path + ":1: expected header '" + want + "', got '" + line + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_environment(const EnvironmentSeries& env,
                       const std::string& buildings_path,
                       const std::string& district_path) {
  auto bf = open_out(buildings_path);
  bf << "hour,building,load_kwh,pv_kwh\n";
  for (std::size_t b = 0; b < env.n_buildings(); ++b) {
    const auto& bd = env.buildings()[b];
    for (Hour h = env.start(); h < env.end(); ++h)
      bf << h << ',' << b << ',' << format_double(bd.load.at(h)) << ','
         << format_double(bd.pv.at(h)) << '\n';
  }
  auto df = open_out(district_path);
  df << "hour,price,carbon\n";
  for (Hour h = env.start(); h < env.end(); ++h)
    df << h << ',' << format_double(env.price().at(h)) << ','
       << format_double(env.carbon().at(h)) << '\n';
}

EnvironmentSeries read_environment(const std::string& buildings_path,
                                   const std::string& district_path,
                                   const std::vector<BatterySpec>& batteries) {
  auto bf = open_in(buildings_path);
  expect_header(bf, "hour,building,load_kwh,pv_kwh", buildings_path);
  std::map<long long, std::pair<std::vector<double>, std::vector<double>>> per_b;
  std::map<long long, Hour> first_hour;
  std::string line;
  std::size_t ln = 1;
  while (std::getline(bf, line)) {
    ++ln;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 4)
      fail(Errc::Format, row_msg(buildings_path, ln, "expected 4 columns"));
    const long long hour = parse_int(f[0], buildings_path, ln);
    const long long b = parse_int(f[1], buildings_path, ln);
    auto& [loads, pvs] = per_b[b];
    if (loads.empty())
      first_hour[b] = hour;
    else if (hour != first_hour[b] + static_cast<Hour>(loads.size()))
      fail(Errc::Format,
           row_msg(buildings_path, ln, "hours must be contiguous per building"));
    loads.push_back(parse_double(f[2], buildings_path, ln));
    pvs.push_back(parse_double(f[3], buildings_path, ln));
  }
  if (per_b.empty()) fail(Errc::Format, buildings_path + ": no data rows");
  if (batteries.size() != per_b.size())
    fail(Errc::Config, "need exactly one battery spec per building (got " +
                           std::to_string(batteries.size()) + " for " +
                           std::to_string(per_b.size()) + " buildings)");

  auto df = open_in(district_path);
  expect_header(df, "hour,price,carbon", district_path);
  std::vector<double> price, carbon;
  Hour d_start = 0;
  ln = 1;
  while (std::getline(df, line)) {
    ++ln;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 3)
      fail(Errc::Format, row_msg(district_path, ln, "expected 3 columns"));
    const long long hour = parse_int(f[0], district_path, ln);
    if (price.empty())
      d_start = hour;
    else if (hour != d_start + static_cast<Hour>(price.size()))
      fail(Errc::Format, row_msg(district_path, ln, "hours must be contiguous"));
    price.push_back(parse_double(f[1], district_path, ln));
    carbon.push_back(parse_double(f[2], district_path, ln));
  }
  if (price.empty()) fail(Errc::Format, district_path + ": no data rows");

  std::vector<Building> buildings;
  std::size_t bi = 0;
  for (auto& [b, series] : per_b) {
    buildings.push_back(Building{TimeSeries(first_hour[b], std::move(series.first)),
                                 TimeSeries(first_hour[b], std::move(series.second)),
                                 batteries[bi++]});
  }
  return EnvironmentSeries(std::move(buildings),
                           TimeSeries(d_start, std::move(price)),
                           TimeSeries(d_start, std::move(carbon)));
}

void write_archive(const ForecastArchive& archive, const std::string& path) {
  auto out = open_out(path);
  out << "origin,target,scenario,value\n";
  for (const auto& w : archive.windows()) {
    if (w.kind() == ForecastKind::Point) {
      const auto& vals = w.point_values();
      for (int i = 0; i < w.horizon(); ++i)
        out << w.origin() << ',' << (w.origin() + 1 + i) << ",0,"
            << format_double(vals[static_cast<std::size_t>(i)]) << '\n';
    } else {
      const auto& rows = w.scenario_rows();
      for (std::size_t j = 0; j < rows.size(); ++j)
        for (int i = 0; i < w.horizon(); ++i)
          out << w.origin() << ',' << (w.origin() + 1 + i) << ',' << j << ','
              << format_double(rows[j][static_cast<std::size_t>(i)]) << '\n';
    }
  }
}

ForecastArchive read_archive(const std::string& path, ForecastKind expected) {
  auto in = open_in(path);
  expect_header(in, "origin,target,scenario,value", path);

  struct Raw {
    std::vector<std::vector<double>> rows;  // [scenario][step]
  };
  std::vector<std::pair<Hour, Raw>> origins;  // in file order
  std::string line;
  std::size_t ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 4)
      fail(Errc::Format, row_msg(path, ln, "expected 4 columns"));
    const long long origin = parse_int(f[0], path, ln);
    const long long target = parse_int(f[1], path, ln);
    const long long scen = parse_int(f[2], path, ln);
    const double value = parse_double(f[3], path, ln);
    if (expected == ForecastKind::Point && scen != 0)
      fail(Errc::Format,
           row_msg(path, ln, "point archive must use scenario 0 only"));
    if (scen < 0) fail(Errc::Format, row_msg(path, ln, "negative scenario id"));

    if (origins.empty() || origins.back().first != origin) {
      if (!origins.empty()) {
        // rows must be sorted by origin
        if (origin < origins.back().first)
          fail(Errc::Format, row_msg(path, ln, "origins must be ascending"));
      }
      origins.push_back({origin, Raw{}});
    }
    Raw& raw = origins.back().second;
    if (scen == static_cast<long long>(raw.rows.size())) raw.rows.emplace_back();
    if (scen != static_cast<long long>(raw.rows.size()) - 1)
      fail(Errc::Format,
           row_msg(path, ln, "rows must be sorted by (origin, scenario, target)"));
    auto& row = raw.rows[static_cast<std::size_t>(scen)];
    if (target != origin + 1 + static_cast<long long>(row.size()))
      fail(Errc::Format, row_msg(path, ln,
                                 "targets must run origin+1..origin+H without "
                                 "gaps"));
    row.push_back(value);
  }
  if (origins.empty()) fail(Errc::Format, path + ": no data rows");

  const std::size_t n_scen = origins.front().second.rows.size();
  const std::size_t horizon = origins.front().second.rows.front().size();
  if (expected == ForecastKind::Scenario && n_scen < 1)
    fail(Errc::Format, path + ": scenario archive needs N >= 1");

  Hour interval = 1;
  if (origins.size() > 1) interval = origins[1].first - origins[0].first;
  if (interval < 1) fail(Errc::Format, path + ": origins must be increasing");

  std::vector<ForecastWindow> windows;
  for (std::size_t k = 0; k < origins.size(); ++k) {
    auto& [origin, raw] = origins[k];
    if (k > 0 && origin - origins[k - 1].first != interval)
      fail(Errc::Format,
           path + ": origin spacing not constant at origin " +
               std::to_string(origin));
    if (raw.rows.size() != n_scen)
      fail(Errc::Format, path + ": scenario count differs at origin " +
                             std::to_string(origin));
    for (const auto& row : raw.rows)
      if (row.size() != horizon)
        fail(Errc::Format, path + ": ragged rows at origin " +
                               std::to_string(origin) + " (expected " +
                               std::to_string(horizon) + " targets)");
    if (expected == ForecastKind::Point)
      windows.push_back(ForecastWindow::point(origin, std::move(raw.rows[0])));
    else
      windows.push_back(ForecastWindow::scenario(origin, std::move(raw.rows)));
  }
  return ForecastArchive(interval, std::move(windows));
}

}  // namespace battsched::csvio
