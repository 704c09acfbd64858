#pragma once

#include <filesystem>

#include "visco/spectral/field.hpp"

namespace visco {

/// Binary field snapshot:
///   "VTRS" | u32 version | u32 n1 n2 n3 | u32 rank (0 scalar, 1 vector, 2 tensor)
///   | f64 time | f64 values (physical space, y1 fastest, components consecutive)
/// All integers and doubles little-endian.
struct Snapshot {
  Field field;
  double time = 0.0;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::filesystem::path& path, const Field& f, double time);
Snapshot read_snapshot(const std::filesystem::path& path, Dealias dealias = Dealias::Pad3Half);

}  // namespace visco
