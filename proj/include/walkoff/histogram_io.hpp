#pragma once

#include <string>

#include "walkoff/analysis.hpp"

namespace walkoff {

// Plain-text joint-histogram format:
//   # x_s_axis: <min> <max> <n>
//   # x_i_axis: <min> <max> <n>
//   # z: <value>
//   # magnification: <value>
// followed by n_s rows of n_i nonnegative numbers (rows scan x_s). Values may
// be separated by whitespace or commas, so the CSV matrices this toolkit
// writes are directly ingestible. Parsing is locale-independent; malformed
// input raises ParseError with a line number.
//
// apply_magnification divides both axes by the declared magnification,
// mapping camera-plane onto object-plane coordinates.
JointIntensity ingest_histogram(const std::string& path, bool apply_magnification = false);

// Inverse of ingest_histogram: comma separators, shortest round-trip number
// formatting (read-back is bit-exact).
std::string render_histogram(const JointIntensity& joint);
void write_histogram(const std::string& path, const JointIntensity& joint);

}  // namespace walkoff
