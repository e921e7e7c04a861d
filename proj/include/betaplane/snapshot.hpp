#pragma once

#include <filesystem>

#include "betaplane/spectral_field.hpp"

namespace betaplane {

// Binary layout: "BPF1", n (uint64), l (float64), then n*n float64 samples
// in row-major order. All multi-byte values little-endian.
void write_snapshot(const std::filesystem::path& path, const PhysicalField& f);
PhysicalField read_snapshot(const std::filesystem::path& path);

}  // namespace betaplane
