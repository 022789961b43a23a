// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_SNAPSHOT_HPP
#define MPOLAR_SNAPSHOT_HPP

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "mpolar/common.hpp"
#include "mpolar/field.hpp"
#include "mpolar/grid.hpp"

namespace mpolar {

// State snapshot file, for checkpointing and cross-run comparison.
//
// Layout (little-endian, packed):
//   magic   8 bytes  "MPOLARF1"
//   name   16 bytes  field name, NUL-padded
//   n       u32      modes per axis
//   L       f64      box period
//   time    f64      simulation time
//   payload 6 * n*n*(n/2+1) complex doubles (re,im), components
//           u1,u2,u3,w1,w2,w3 in index order (ix*n + iy)*(n/2+1) + iz.
inline constexpr char kSnapshotMagic[9] = "MPOLARF1";

inline void write_snapshot(const std::string& path, const SpectralState& z,
                           const std::string& name = "state") {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("snapshot: cannot open " + path + " for writing");
  out.write(kSnapshotMagic, 8);
  char namebuf[16] = {};
  std::strncpy(namebuf, name.c_str(), sizeof(namebuf) - 1);
  out.write(namebuf, sizeof(namebuf));
  const std::uint32_t n = static_cast<std::uint32_t>(z.grid().n());
  const Real L = z.grid().box_length(), t = z.time;
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  out.write(reinterpret_cast<const char*>(&L), sizeof(L));
  out.write(reinterpret_cast<const char*>(&t), sizeof(t));
  auto dump = [&](const SpectralField& f) {
    for (const auto& comp : f.comp)
      out.write(reinterpret_cast<const char*>(comp.data()),
                static_cast<std::streamsize>(comp.size() * sizeof(Complex)));
  };
  dump(z.u);
  dump(z.w);
  if (!out) throw IoError("snapshot: short write to " + path);
}

inline SpectralState read_snapshot(const std::string& path, std::string* name = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("snapshot: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kSnapshotMagic, 8) != 0)
    throw IoError("snapshot: bad magic in " + path);
  char namebuf[16];
  in.read(namebuf, sizeof(namebuf));
  if (name) *name = std::string(namebuf, strnlen(namebuf, sizeof(namebuf)));
  std::uint32_t n = 0;
  Real L = 0, t = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  in.read(reinterpret_cast<char*>(&L), sizeof(L));
  in.read(reinterpret_cast<char*>(&t), sizeof(t));
  if (!in) throw IoError("snapshot: truncated header in " + path);
  Grid g(static_cast<int>(n), L);
  SpectralState z(g);
  z.time = t;
  auto load = [&](SpectralField& f) {
    for (auto& comp : f.comp)
      in.read(reinterpret_cast<char*>(comp.data()),
              static_cast<std::streamsize>(comp.size() * sizeof(Complex)));
  };
  load(z.u);
  load(z.w);
  if (!in) throw IoError("snapshot: truncated payload in " + path);
  return z;
}

}  // namespace mpolar

#endif  // MPOLAR_SNAPSHOT_HPP
