#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "oran/model.hpp"

namespace oran {

// One row of the trace file. Normative header:
//   record_id,user_kind,cpu_request,rate_pps,packet_cycles,o_ru
struct TraceRecord {
  long record_id = 0;
  DemandKind user_kind = DemandKind::Vsc;
  double cpu_request = 0.0;
  double rate_pps = 0.0;
  double packet_cycles = 0.0;  // > 0 iff vsc
  int o_ru = 0;
};

// Seeded demand generator. All VSCs share one cpu request, one service rate
// mu and one packet size beta; tolerant users draw cpus and lambda per user.
struct SyntheticConfig {
  int w_count = 0;
  int v_count = 0;
  double vsc_cpu_min = 1.0, vsc_cpu_max = 1.0;    // single shared draw
  double tol_cpu_min = 1.0, tol_cpu_max = 1.0;    // per-user draws
  double mu_pps = 0.0;                            // shared VSC service rate
  double lambda_capture_pps = 0.0;                // VSC capture rate; must stay below mu
  double lambda_min_pps = 0.0, lambda_max_pps = 0.0;  // tolerant arrival-rate range
  double beta_min_cycles = 0.0, beta_max_cycles = 0.0;  // single shared draw
  int o_ru_count = 1;
  uint64_t seed = 0;

  void validate() const;
};

// Strict parse of the delimited trace format; throws ParseError with the
// offending 1-based line number.
std::vector<TraceRecord> parse_trace(const std::filesystem::path& path);

// Inverse of parse_trace: writes the normative header plus one row per record.
void write_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& records);

std::vector<Demand> to_demands(const std::vector<TraceRecord>& records);
std::vector<TraceRecord> to_records(const std::vector<Demand>& demands);

// W VSC demands followed by V tolerant demands, deterministic per seed.
std::vector<Demand> generate_synthetic(const SyntheticConfig& config);

// Arrival order for one slicing window: identity, or a seeded Fisher-Yates
// permutation when shuffle is set.
std::vector<int> build_arrivals(const std::vector<Demand>& demands, bool shuffle, uint64_t seed);

}  // namespace oran
