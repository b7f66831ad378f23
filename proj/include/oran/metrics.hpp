#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace oran {

// One harness observation. wall_clock_s is written as 0 inside metrics files
// so that reruns with the same config and seed are byte-identical; measured
// timings go to stdout only.
struct MetricsRow {
  std::string run_id;
  std::string algo;
  uint64_t seed = 0;
  long episode = 0;  // -1 for rows that are not tied to an episode
  long step = 0;
  double reward = 0.0;
  double energy_w = 0.0;
  double mean_latency_s = 0.0;
  long violations = 0;
  double wall_clock_s = 0.0;
};

extern const char* const kMetricsHeader;

class MetricsWriter {
 public:
  explicit MetricsWriter(const std::filesystem::path& path);
  void write(const MetricsRow& row);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::vector<MetricsRow> read_metrics(const std::filesystem::path& path);

}  // namespace oran
