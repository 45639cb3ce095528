#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "solver/state.hpp"

namespace bpl {

inline constexpr std::uint32_t kSnapshotVersion = 1;

// Binary layout, little-endian regardless of host:
//   "BPL1" | u32 version | u32 n | f64 t | f64 mu | f64 epsilon0 | ω[n²] | θ[n²]
// with both arrays row-major in f64. The κ family is not stored, so loading
// takes it as a hint; ε₀ comes from the file.
std::vector<unsigned char> encode_snapshot(const State& s);
State decode_snapshot(const std::vector<unsigned char>& bytes, KappaKind kappa_hint = KappaKind::Sin);

void save_snapshot(const State& s, const std::string& path);
State load_snapshot(const std::string& path, KappaKind kappa_hint = KappaKind::Sin);

}  // namespace bpl
