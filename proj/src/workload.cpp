#include "oran/workload.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "oran/errors.hpp"
#include "oran/rng.hpp"

namespace oran {

namespace {

constexpr const char* kHeader = "record_id,user_kind,cpu_request,rate_pps,packet_cycles,o_ru";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const char* name, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(std::string("non-numeric ") + name + " '" + s + "'", line);
  return value;
}

long parse_long(const std::string& s, const char* name, int line) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(std::string("non-integer ") + name + " '" + s + "'", line);
  return value;
}

void validate_record(const TraceRecord& r, int line) {
  if (!(r.cpu_request > 0.0)) throw ParseError("cpu_request must be > 0", line);
  if (!(r.rate_pps > 0.0)) throw ParseError("rate_pps must be > 0", line);
  if (r.user_kind == DemandKind::Vsc && !(r.packet_cycles > 0.0))
    throw ParseError("vsc rows need packet_cycles > 0", line);
  if (r.user_kind == DemandKind::Tolerant && r.packet_cycles != 0.0)
    throw ParseError("tolerant rows must have packet_cycles = 0", line);
  if (r.o_ru < 0) throw ParseError("o_ru must be >= 0", line);
}

}  // namespace

void SyntheticConfig::validate() const {
  if (w_count < 0 || v_count < 0) throw DomainError("synthetic: counts must be >= 0");
  if (w_count > 0) {
    if (!(mu_pps > 0.0)) throw DomainError("synthetic: mu_pps must be > 0");
    if (!(mu_pps > lambda_capture_pps))
      throw DomainError("synthetic: mu_pps must exceed lambda_capture_pps");
    if (vsc_cpu_min > vsc_cpu_max || !(vsc_cpu_min > 0.0))
      throw DomainError("synthetic: bad vsc cpu range");
    if (beta_min_cycles > beta_max_cycles || !(beta_min_cycles > 0.0))
      throw DomainError("synthetic: bad beta range");
  }
  if (v_count > 0) {
    if (tol_cpu_min > tol_cpu_max || !(tol_cpu_min > 0.0))
      throw DomainError("synthetic: bad tolerant cpu range");
    if (lambda_min_pps > lambda_max_pps || !(lambda_min_pps > 0.0))
      throw DomainError("synthetic: bad lambda range");
  }
  if (o_ru_count < 1) throw DomainError("synthetic: o_ru_count must be >= 1");
}

std::vector<TraceRecord> parse_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file " + path.string(), 0);

  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header row", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    throw ParseError(std::string("header must be exactly '") + kHeader + "'", 1);

  std::vector<TraceRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 6)
      throw ParseError("expected 6 columns, got " + std::to_string(fields.size()), line_no);

    TraceRecord r;
    r.record_id = parse_long(fields[0], "record_id", line_no);
    if (fields[1] == "vsc")
      r.user_kind = DemandKind::Vsc;
    else if (fields[1] == "tolerant")
      r.user_kind = DemandKind::Tolerant;
    else
      throw ParseError("user_kind must be 'vsc' or 'tolerant', got '" + fields[1] + "'", line_no);
    r.cpu_request = parse_double(fields[2], "cpu_request", line_no);
    r.rate_pps = parse_double(fields[3], "rate_pps", line_no);
    r.packet_cycles = parse_double(fields[4], "packet_cycles", line_no);
    r.o_ru = static_cast<int>(parse_long(fields[5], "o_ru", line_no));
    validate_record(r, line_no);
    records.push_back(r);
  }
  return records;
}

void write_trace(const std::filesystem::path& path, const std::vector<TraceRecord>& records) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open trace file for writing " + path.string(), 0);
  out << kHeader << "\n";
  char buf[128];
  for (const auto& r : records) {
    out << r.record_id << ',' << to_string(r.user_kind) << ',';
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", r.cpu_request, r.rate_pps,
                  r.packet_cycles);
    out << buf << ',' << r.o_ru << "\n";
  }
}

std::vector<Demand> to_demands(const std::vector<TraceRecord>& records) {
  std::vector<Demand> demands;
  demands.reserve(records.size());
  for (const auto& r : records) {
    Demand d;
    d.kind = r.user_kind;
    d.cpus = r.cpu_request;
    d.arrival_rate_pps = r.rate_pps;
    d.packet_size_cycles = r.packet_cycles;
    d.home_o_ru = r.o_ru;
    demands.push_back(d);
  }
  return demands;
}

std::vector<TraceRecord> to_records(const std::vector<Demand>& demands) {
  std::vector<TraceRecord> records;
  records.reserve(demands.size());
  for (size_t i = 0; i < demands.size(); ++i) {
    TraceRecord r;
    r.record_id = static_cast<long>(i);
    r.user_kind = demands[i].kind;
    r.cpu_request = demands[i].cpus;
    r.rate_pps = demands[i].arrival_rate_pps;
    r.packet_cycles = demands[i].packet_size_cycles;
    r.o_ru = demands[i].home_o_ru;
    records.push_back(r);
  }
  return records;
}

std::vector<Demand> generate_synthetic(const SyntheticConfig& config) {
  config.validate();
  Rng rng(config.seed);

  std::vector<Demand> demands;
  demands.reserve(static_cast<size_t>(config.w_count + config.v_count));

  if (config.w_count > 0) {
    // one draw for the whole VSC class: all VSCs are identical
    double vsc_cpus = uniform_real(rng, config.vsc_cpu_min, config.vsc_cpu_max);
    double beta = uniform_real(rng, config.beta_min_cycles, config.beta_max_cycles);
    for (int w = 0; w < config.w_count; ++w) {
      Demand d;
      d.kind = DemandKind::Vsc;
      d.cpus = vsc_cpus;
      d.arrival_rate_pps = config.mu_pps;
      d.packet_size_cycles = beta;
      d.home_o_ru = static_cast<int>(uniform_index(rng, static_cast<uint64_t>(config.o_ru_count)));
      demands.push_back(d);
    }
  }
  for (int v = 0; v < config.v_count; ++v) {
    Demand d;
    d.kind = DemandKind::Tolerant;
    d.cpus = uniform_real(rng, config.tol_cpu_min, config.tol_cpu_max);
    d.arrival_rate_pps = uniform_real(rng, config.lambda_min_pps, config.lambda_max_pps);
    d.packet_size_cycles = 0.0;
    d.home_o_ru = static_cast<int>(uniform_index(rng, static_cast<uint64_t>(config.o_ru_count)));
    demands.push_back(d);
  }
  return demands;
}

std::vector<int> build_arrivals(const std::vector<Demand>& demands, bool shuffle, uint64_t seed) {
  if (demands.empty()) throw DomainError("build_arrivals: empty demand list");
  std::vector<int> order(demands.size());
  std::iota(order.begin(), order.end(), 0);
  if (shuffle) {
    Rng rng(seed);
    oran::shuffle(order, rng);
  }
  return order;
}

}  // namespace oran
