#include "core/snapshot.hpp"

#include <cstdio>
#include <fstream>

#include "core/errors.hpp"

namespace gpd {

namespace {

void append_num(std::string& out, double v) {
  char buf[32];
  // 9 significant digits; -0 normalized so zero states serialize as zero
  if (v == 0.0) v = 0.0;
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  out += buf;
}

}  // namespace

void write_snapshot(const std::string& path, const Model& model,
                    const SimulationState& st, const VirialStressField& field,
                    const std::string& config_digest_hex) {
  std::string out;
  out.reserve(static_cast<std::size_t>(model.points().size()) * 140 + 256);
  out += "# glacierpd snapshot\n# time=";
  append_num(out, st.time);
  out += " stage=" + std::to_string(st.stage) + " erosion_length=";
  append_num(out, st.eroded_length);
  out += " config=" + config_digest_hex + "\n";
  out += "id,x,y,ux,uy,damage,s11,s22,s12,s21\n";

  const auto& pts = model.points();
  for (int p = 0; p < pts.size(); ++p) {
    out += std::to_string(p);
    out += ',';
    append_num(out, pts.positions[p].x);
    out += ',';
    append_num(out, pts.positions[p].y);
    out += ',';
    append_num(out, st.u[p].x);
    out += ',';
    append_num(out, st.u[p].y);
    out += ',';
    append_num(out, field.damage[p]);
    out += ',';
    append_num(out, field.stress[p].xx);
    out += ',';
    append_num(out, field.stress[p].yy);
    out += ',';
    append_num(out, field.stress[p].xy);
    out += ',';
    append_num(out, field.stress[p].yx);
    out += '\n';
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open snapshot for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write to snapshot: " + path);
}

SnapshotHeader read_snapshot_header(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open snapshot: " + path);
  std::string line1, line2;
  std::getline(f, line1);
  std::getline(f, line2);
  SnapshotHeader h;
  char digest[64] = {0};
  if (std::sscanf(line2.c_str(), "# time=%lf stage=%d erosion_length=%lf config=%63s",
                  &h.time, &h.stage, &h.erosion_length, digest) != 4)
    throw IoError("malformed snapshot header in " + path);
  h.config_digest_hex = digest;
  return h;
}

bool verify_snapshot_digest(const std::string& path, const RunConfig& cfg) {
  return read_snapshot_header(path).config_digest_hex == cfg.digest_hex();
}

}  // namespace gpd
