#pragma once

#include <filesystem>
#include <string>

#include "oran/nn.hpp"

#include "json.hpp"

namespace oran {

// Versioned structured-text dump: layer widths, row-major parameters and the
// optimizer moments, plus a caller-supplied fingerprint object. Doubles are
// written shortest-round-trip, so a reload is bit-exact.
void save_checkpoint(const std::filesystem::path& path, const DenseNet& net, const Adam& opt,
                     const nlohmann::json& fingerprint);

struct LoadedCheckpoint {
  DenseNet net;
  Adam opt;
  std::string fingerprint_dump;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace oran
