#include "oran/metrics.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "oran/errors.hpp"

namespace oran {

const char* const kMetricsHeader =
    "run_id,algo,seed,episode,step,reward,energy_w,mean_latency_s,violations,wall_clock_s";

MetricsWriter::MetricsWriter(const std::filesystem::path& path) : path_(path) {
  std::filesystem::create_directories(path.parent_path());
  out_.open(path);
  if (!out_) throw ConfigError("cannot open metrics file " + path.string());
  out_ << kMetricsHeader << "\n";
}

void MetricsWriter::write(const MetricsRow& row) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", row.reward, row.energy_w,
                row.mean_latency_s);
  out_ << row.run_id << ',' << row.algo << ',' << row.seed << ',' << row.episode << ','
       << row.step << ',' << buf << ',' << row.violations << ',' << row.wall_clock_s << "\n";
}

std::vector<MetricsRow> read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open metrics file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("metrics file missing header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMetricsHeader) throw ParseError("unexpected metrics header", 1);

  std::vector<MetricsRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 10) throw ParseError("expected 10 metrics columns", line_no);

    auto to_d = [&](const std::string& s) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError("bad numeric field '" + s + "'", line_no);
      return v;
    };
    MetricsRow row;
    row.run_id = fields[0];
    row.algo = fields[1];
    row.seed = static_cast<uint64_t>(std::stoull(fields[2]));
    row.episode = std::stol(fields[3]);
    row.step = std::stol(fields[4]);
    row.reward = to_d(fields[5]);
    row.energy_w = to_d(fields[6]);
    row.mean_latency_s = to_d(fields[7]);
    row.violations = std::stol(fields[8]);
    row.wall_clock_s = to_d(fields[9]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace oran
