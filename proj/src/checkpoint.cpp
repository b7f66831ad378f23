#include "oran/checkpoint.hpp"

#include <fstream>

#include "oran/errors.hpp"

namespace oran {

namespace {
constexpr int kVersion = 1;
}

void save_checkpoint(const std::filesystem::path& path, const DenseNet& net, const Adam& opt,
                     const nlohmann::json& fingerprint) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["widths"] = net.widths();
  j["params"] = std::vector<double>(net.params().begin(), net.params().end());
  j["adam"] = {
      {"lr", opt.learning_rate()}, {"beta1", opt.beta1()},   {"beta2", opt.beta2()},
      {"epsilon", opt.epsilon()},  {"t", opt.step_count()},  {"m", opt.first_moment()},
      {"v", opt.second_moment()},
  };
  j["fingerprint"] = fingerprint;

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write checkpoint " + path.string());
  out << j.dump(2) << "\n";
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read checkpoint " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("checkpoint " + path.string() + ": " + e.what());
  }
  if (j.value("version", -1) != kVersion)
    throw ConfigError("checkpoint " + path.string() + ": unsupported version");

  std::vector<int> widths = j.at("widths").get<std::vector<int>>();
  std::vector<double> params = j.at("params").get<std::vector<double>>();
  DenseNet net(widths, 0);
  if (params.size() != net.param_count())
    throw ConfigError("checkpoint " + path.string() + ": parameter count mismatch");
  std::copy(params.begin(), params.end(), net.params().begin());

  const auto& a = j.at("adam");
  Adam opt(net.param_count(), a.at("lr").get<double>(), a.at("beta1").get<double>(),
           a.at("beta2").get<double>(), a.at("epsilon").get<double>());
  opt.restore(a.at("m").get<std::vector<double>>(), a.at("v").get<std::vector<double>>(),
              a.at("t").get<long>());

  return LoadedCheckpoint{std::move(net), std::move(opt),
                          j.value("fingerprint", nlohmann::json::object()).dump()};
}

}  // namespace oran
