#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "oran/errors.hpp"
#include "oran/workload.hpp"

using namespace oran;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "oranlab_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

SyntheticConfig small_config() {
  SyntheticConfig cfg;
  cfg.w_count = 3;
  cfg.v_count = 2;
  cfg.vsc_cpu_min = 0.5;
  cfg.vsc_cpu_max = 1.5;
  cfg.tol_cpu_min = 0.5;
  cfg.tol_cpu_max = 2.0;
  cfg.mu_pps = 500.0;
  cfg.lambda_capture_pps = 400.0;
  cfg.lambda_min_pps = 50.0;
  cfg.lambda_max_pps = 150.0;
  cfg.beta_min_cycles = 5.0e5;
  cfg.beta_max_cycles = 2.0e6;
  cfg.o_ru_count = 3;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("parse_trace accepts the documented format") {
  const char* header = "record_id,user_kind,cpu_request,rate_pps,packet_cycles,o_ru";

  SUBCASE("header-only file parses to an empty list") {
    auto path = temp_file("header_only.csv");
    write_file(path, std::string(header) + "\n");
    CHECK(parse_trace(path).empty());
  }

  SUBCASE("three valid rows, order preserved") {
    auto path = temp_file("three_rows.csv");
    write_file(path, std::string(header) +
                         "\n0,vsc,1.5,500,1000000,0\n1,tolerant,2,80,0,1\n2,vsc,0.5,500,2e6,2\n");
    auto records = parse_trace(path);
    REQUIRE(records.size() == 3);
    CHECK(records[0].record_id == 0);
    CHECK(records[0].user_kind == DemandKind::Vsc);
    CHECK(records[1].user_kind == DemandKind::Tolerant);
    CHECK(records[1].cpu_request == doctest::Approx(2.0));
    CHECK(records[2].packet_cycles == doctest::Approx(2.0e6));
    CHECK(records[2].o_ru == 2);
  }

  SUBCASE("negative cpu_request reports the offending line") {
    auto path = temp_file("bad_cpu.csv");
    write_file(path, std::string(header) + "\n0,vsc,1.5,500,1e6,0\n1,vsc,-1,500,1e6,0\n");
    try {
      parse_trace(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }

  SUBCASE("wrong header is rejected") {
    auto path = temp_file("bad_header.csv");
    write_file(path, "id,kind\n");
    CHECK_THROWS_AS(parse_trace(path), ParseError);
  }

  SUBCASE("non-numeric field is rejected with its line") {
    auto path = temp_file("bad_number.csv");
    write_file(path, std::string(header) + "\n0,vsc,abc,500,1e6,0\n");
    try {
      parse_trace(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }

  SUBCASE("tolerant rows must carry zero packet_cycles") {
    auto path = temp_file("bad_tolerant.csv");
    write_file(path, std::string(header) + "\n0,tolerant,1,80,5,0\n");
    CHECK_THROWS_AS(parse_trace(path), ParseError);
  }
}

TEST_CASE("generate_synthetic honors the shared-VSC contract") {
  SyntheticConfig cfg = small_config();
  auto demands = generate_synthetic(cfg);
  REQUIRE(demands.size() == 5);

  for (int w = 0; w < 3; ++w) {
    CHECK(demands[static_cast<size_t>(w)].kind == DemandKind::Vsc);
    CHECK(demands[static_cast<size_t>(w)].cpus == demands[0].cpus);
    CHECK(demands[static_cast<size_t>(w)].arrival_rate_pps == cfg.mu_pps);
    CHECK(demands[static_cast<size_t>(w)].packet_size_cycles == demands[0].packet_size_cycles);
  }
  for (size_t v = 3; v < 5; ++v) {
    CHECK(demands[v].kind == DemandKind::Tolerant);
    CHECK(demands[v].packet_size_cycles == 0.0);
    CHECK(demands[v].arrival_rate_pps >= cfg.lambda_min_pps);
    CHECK(demands[v].arrival_rate_pps <= cfg.lambda_max_pps);
  }

  SUBCASE("same seed reproduces the list exactly") {
    auto again = generate_synthetic(cfg);
    REQUIRE(again.size() == demands.size());
    for (size_t i = 0; i < demands.size(); ++i) {
      CHECK(again[i].cpus == demands[i].cpus);
      CHECK(again[i].arrival_rate_pps == demands[i].arrival_rate_pps);
      CHECK(again[i].home_o_ru == demands[i].home_o_ru);
    }
  }

  SUBCASE("degenerate range is rejected") {
    SyntheticConfig bad = cfg;
    bad.lambda_min_pps = 200.0;  // above lambda_max
    CHECK_THROWS_AS(generate_synthetic(bad), DomainError);
  }

  SUBCASE("mu must exceed the capture rate") {
    SyntheticConfig bad = cfg;
    bad.lambda_capture_pps = 600.0;
    CHECK_THROWS_AS(generate_synthetic(bad), DomainError);
  }
}

TEST_CASE("lambda draws are uniform over the configured range") {
  SyntheticConfig cfg = small_config();
  cfg.w_count = 0;
  cfg.v_count = 100000;
  cfg.seed = 99;
  auto demands = generate_synthetic(cfg);
  double sum = 0.0;
  for (const auto& d : demands) sum += d.arrival_rate_pps;
  double mean = sum / static_cast<double>(demands.size());
  double midpoint = 0.5 * (cfg.lambda_min_pps + cfg.lambda_max_pps);
  CHECK(std::abs(mean - midpoint) / midpoint < 0.01);
}

TEST_CASE("trace round-trip preserves generated demands") {
  SyntheticConfig cfg = small_config();
  for (uint64_t seed = 0; seed < 25; ++seed) {
    cfg.seed = seed;
    auto demands = generate_synthetic(cfg);
    auto path = temp_file("roundtrip.csv");
    write_trace(path, to_records(demands));
    auto reparsed = to_demands(parse_trace(path));
    REQUIRE(reparsed.size() == demands.size());
    for (size_t i = 0; i < demands.size(); ++i) {
      CHECK(reparsed[i].kind == demands[i].kind);
      CHECK(reparsed[i].cpus == demands[i].cpus);  // %.17g round-trips doubles
      CHECK(reparsed[i].arrival_rate_pps == demands[i].arrival_rate_pps);
      CHECK(reparsed[i].packet_size_cycles == demands[i].packet_size_cycles);
      CHECK(reparsed[i].home_o_ru == demands[i].home_o_ru);
    }
  }
}

TEST_CASE("generated demands satisfy the demand invariants under fuzzing") {
  SyntheticConfig cfg = small_config();
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    cfg.seed = seed;
    cfg.w_count = static_cast<int>(seed % 4);
    cfg.v_count = static_cast<int>((seed / 4) % 4);
    auto demands = generate_synthetic(cfg);
    CHECK(demands.size() == static_cast<size_t>(cfg.w_count + cfg.v_count));
    for (const auto& d : demands) {
      CHECK(d.cpus > 0.0);
      CHECK(d.arrival_rate_pps > 0.0);
      CHECK((d.packet_size_cycles > 0.0) == d.is_vsc());
      CHECK(d.home_o_ru >= 0);
      CHECK(d.home_o_ru < cfg.o_ru_count);
    }
  }
}

TEST_CASE("build_arrivals") {
  SyntheticConfig cfg = small_config();
  auto demands = generate_synthetic(cfg);

  SUBCASE("no shuffle gives the identity permutation") {
    auto order = build_arrivals(demands, false, 123);
    for (size_t i = 0; i < order.size(); ++i) CHECK(order[i] == static_cast<int>(i));
  }

  SUBCASE("shuffled output is a permutation and is seed-stable") {
    auto order = build_arrivals(demands, true, 123);
    auto again = build_arrivals(demands, true, 123);
    CHECK(order == again);
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == static_cast<int>(i));
  }

  SUBCASE("empty demand list is rejected") {
    CHECK_THROWS_AS(build_arrivals({}, false, 1), DomainError);
  }
}
