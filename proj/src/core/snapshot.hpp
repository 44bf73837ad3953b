#pragma once
#include <string>

#include "core/config.hpp"
#include "core/solver.hpp"
#include "core/stress.hpp"

namespace gpd {

// Comma-separated snapshot, one row per point sorted by id, scientific
// notation with 9 significant digits, LF endings. Reruns of the same config
// must produce byte-identical files.
void write_snapshot(const std::string& path, const Model& model,
                    const SimulationState& st, const VirialStressField& field,
                    const std::string& config_digest_hex);

struct SnapshotHeader {
  double time = 0.0;
  int stage = 0;
  double erosion_length = 0.0;
  std::string config_digest_hex;
};

SnapshotHeader read_snapshot_header(const std::string& path);

// Recomputes the producing config's digest and matches it against the file.
bool verify_snapshot_digest(const std::string& path, const RunConfig& cfg);

}  // namespace gpd
