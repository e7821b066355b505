#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "schroflow/field.hpp"
#include "schroflow/norms.hpp"

namespace schroflow::io {

// Snapshot layout, all little-endian:
//   char[4] "SFLW" | u32 version | u32 m | u32 K | u32 sizes[m] | f64 lengths[m]
//   | f64 payload[N*K], node-major (K components of node 0, then node 1, ...)
inline constexpr std::uint32_t snapshot_version = 1;

std::vector<std::uint8_t> encode_snapshot(const Field& u);
/// Throws Error(Io) on a bad magic, version, or truncated payload.
Field decode_snapshot(std::span<const std::uint8_t> bytes, const TargetManifold& target);

void write_snapshot(const std::filesystem::path& path, const Field& u);
Field read_snapshot(const std::filesystem::path& path, const TargetManifold& target);

/// Shortest decimal that round-trips.
std::string format_double(double value);

/// Columns t, energy, sup_grad, h0..hk, w0..wk, drift.
void write_reports_csv(std::ostream& out, std::span<const norms::NormReport> reports);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace schroflow::io
