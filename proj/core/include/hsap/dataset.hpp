#pragma once

#include "hsap/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hsap {

/// A point set: one point per row, optional integer label per row.
struct DataMatrix {
  Matrix points;            // T x n
  std::vector<int> labels;  // empty or size T
};

enum class FileFormat { Csv, Binary };

/// Loads a T x n matrix. CSV: comma-separated rows, no header. Binary: the
/// format described next to save_matrix. Malformed content throws DataError.
Matrix load_matrix(const std::string& path, FileFormat format);

/// Writes atomically (temp file in the same directory, then rename).
/// CSV doubles use the shortest round-trip decimal form. Binary layout:
/// magic "HSAP", u32 version 1, u64 rows, u64 cols (all little-endian),
/// then rows*cols IEEE-754 doubles, row-major, little-endian.
void save_matrix(const Matrix& m, const std::string& path, FileFormat format);

/// One integer per line, aligned with matrix row order.
std::vector<int> load_labels(const std::string& path);
void save_labels(const std::vector<int>& labels, const std::string& path);

/// Three-piece synthetic benchmark set: two skew lines and a plane in R^3.
struct SynthConfig {
  Index per_line = 100;   // points on each of the two lines
  Index plane = 500;      // points on the plane
  double range_lo = -5.0; // parameters t, s drawn uniformly from [lo, hi]
  double range_hi = 5.0;
  std::uint64_t seed = 42;
};

Vector line1_map(double t);           // (t, -t, 1)
Vector line2_map(double t);           // (t, t, 4)
Vector plane_map(double t, double s); // (t/2 - s, s, t - s - 3)

/// Labels are 1 (line one), 2 (line two), 3 (plane), in that row order.
DataMatrix gen_synthetic(const SynthConfig& config);

/// Hyperspectral cube shape; pixels are flattened row-major.
struct CubeDescriptor {
  Index height = 0;
  Index width = 0;
  Index bands = 0;
  Index pixel_count() const { return height * width; }
};

/// Band-interleaved-by-pixel payload -> (height*width) x bands matrix;
/// row p holds the spectrum of the p-th pixel in row-major scan order.
Matrix flatten_cube(const std::vector<double>& raw, const CubeDescriptor& desc);

}  // namespace hsap
