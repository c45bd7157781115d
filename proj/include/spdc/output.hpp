#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spdc/grid.hpp"

namespace spdc {

inline constexpr const char* kVersion = "0.1.0";

uint64_t fnv1a64(const void* data, size_t size);
std::string fnv1a64_hex(const std::string& text);

// Atomic text write (tmp file + rename).
void write_text_file(const std::string& path, const std::string& content);

// CSV with '#'-prefixed metadata lines, a header row, then %.17g values.
// A NaN cell is written as "nan".
std::string make_csv(const std::vector<std::string>& metadata,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

// 16-bit PGM (P5, big-endian samples), top image row = maximum q_y. The
// comment line carries the axis ranges and the normalization maximum.
std::string make_pgm16(const std::vector<double>& map, const GridAxis& ax,
                       const GridAxis& ay, const std::string& axis_comment);

// '#'-prefixed metadata block: tool version, determinism note, resolved config.
std::vector<std::string> metadata_block(const std::string& resolved_config,
                                        const std::string& determinism);

struct ManifestEntry {
    std::string file;
    std::string fnv1a64;
};

// RunManifest JSON, written atomically after a successful run.
std::string make_manifest_json(const std::string& resolved_config,
                               double elapsed_seconds,
                               const std::vector<ManifestEntry>& outputs);

} // namespace spdc
