#pragma once

#include <string>

#include "tnls/field.hpp"

namespace tnls {

// Snapshot layout (all little-endian):
//   "TNLS" | u32 version | 4 x u32 grid | 4 x f64 lambda | row-major (re, im) f64 pairs
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const PhysicalField& field);
PhysicalField read_snapshot(const std::string& path);

}  // namespace tnls
