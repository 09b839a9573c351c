#include "hsap/dataset.hpp"

#include "hsap/errors.hpp"
#include "hsap/rng.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "file formats are pinned little-endian");

namespace hsap {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'A', 'P'};
constexpr std::uint32_t kFormatVersion = 1;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const char* first, const char* last, const std::string& context) {
  double v = 0.0;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw DataError("non-numeric field '" + std::string(first, last) + "' " + context);
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (in.bad()) throw DataError("read failure on " + path);
  return content;
}

/// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw DataError("write failure on " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

Matrix load_matrix_csv(const std::string& path) {
  const std::string content = read_file(path);

  std::vector<std::vector<double>> rows;
  Index cols = -1;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    std::size_t end = eol;
    if (end > pos && content[end - 1] == '\r') --end;
    ++line_no;
    if (end > pos) {
      std::vector<double> row;
      std::size_t field = pos;
      for (;;) {
        std::size_t comma = content.find(',', field);
        if (comma == std::string::npos || comma >= end) comma = end;
        row.push_back(parse_double(content.data() + field, content.data() + comma,
                                   "at " + path + " line " + std::to_string(line_no)));
        if (comma == end) break;
        field = comma + 1;
      }
      if (cols < 0) cols = static_cast<Index>(row.size());
      if (static_cast<Index>(row.size()) != cols)
        throw DataError("ragged row at " + path + " line " + std::to_string(line_no) +
                        ": " + std::to_string(row.size()) + " fields, expected " +
                        std::to_string(cols));
      rows.push_back(std::move(row));
    }
    pos = eol + 1;
  }
  if (rows.empty()) throw DataError("empty matrix in " + path);

  Matrix m(static_cast<Index>(rows.size()), cols);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Matrix load_matrix_binary(const std::string& path) {
  const std::string content = read_file(path);
  if (content.size() < 24 || std::memcmp(content.data(), kMagic, 4) != 0)
    throw DataError("bad magic bytes in " + path);

  std::uint32_t version = 0;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::memcpy(&version, content.data() + 4, 4);
  std::memcpy(&rows, content.data() + 8, 8);
  std::memcpy(&cols, content.data() + 16, 8);
  if (version != kFormatVersion)
    throw DataError("unsupported format version " + std::to_string(version) + " in " + path);
  if (rows == 0 || cols == 0) throw DataError("empty matrix in " + path);
  if (cols > (1ULL << 32) || rows > (content.size() - 24) / (8 * cols))
    throw DataError("truncated payload in " + path);

  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  const char* p = content.data() + 24;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      double v = 0.0;
      std::memcpy(&v, p, 8);
      p += 8;
      m(i, j) = v;
    }
  return m;
}

}  // namespace

Matrix load_matrix(const std::string& path, FileFormat format) {
  return format == FileFormat::Csv ? load_matrix_csv(path) : load_matrix_binary(path);
}

void save_matrix(const Matrix& m, const std::string& path, FileFormat format) {
  if (m.rows() == 0 || m.cols() == 0)
    throw std::invalid_argument("save_matrix: refusing to write an empty matrix");

  std::string content;
  if (format == FileFormat::Csv) {
    content.reserve(static_cast<std::size_t>(m.size()) * 20);
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = 0; j < m.cols(); ++j) {
        if (j) content.push_back(',');
        content += format_double(m(i, j));
      }
      content.push_back('\n');
    }
  } else {
    const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
    const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
    content.reserve(24 + static_cast<std::size_t>(m.size()) * 8);
    content.append(kMagic, 4);
    char header[20];
    std::memcpy(header, &kFormatVersion, 4);
    std::memcpy(header + 4, &rows, 8);
    std::memcpy(header + 12, &cols, 8);
    content.append(header, 20);
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) {
        const double v = m(i, j);
        char bytes[8];
        std::memcpy(bytes, &v, 8);
        content.append(bytes, 8);
      }
  }
  write_file_atomic(path, content);
}

std::vector<int> load_labels(const std::string& path) {
  const std::string content = read_file(path);
  std::vector<int> labels;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    std::size_t end = eol;
    if (end > pos && content[end - 1] == '\r') --end;
    ++line_no;
    if (end > pos) {
      int v = 0;
      const auto res = std::from_chars(content.data() + pos, content.data() + end, v);
      if (res.ec != std::errc() || res.ptr != content.data() + end)
        throw DataError("bad label at " + path + " line " + std::to_string(line_no));
      labels.push_back(v);
    }
    pos = eol + 1;
  }
  if (labels.empty()) throw DataError("no labels in " + path);
  return labels;
}

void save_labels(const std::vector<int>& labels, const std::string& path) {
  std::string content;
  content.reserve(labels.size() * 4);
  for (const int v : labels) {
    content += std::to_string(v);
    content.push_back('\n');
  }
  write_file_atomic(path, content);
}

Vector line1_map(double t) {
  Vector v(3);
  v << t, -t, 1.0;
  return v;
}

Vector line2_map(double t) {
  Vector v(3);
  v << t, t, 4.0;
  return v;
}

Vector plane_map(double t, double s) {
  Vector v(3);
  v << t / 2.0 - s, s, t - s - 3.0;
  return v;
}

DataMatrix gen_synthetic(const SynthConfig& config) {
  if (config.per_line < 1 || config.plane < 1)
    throw std::invalid_argument("gen_synthetic: counts must be positive");
  if (!(config.range_lo <= config.range_hi))
    throw std::invalid_argument("gen_synthetic: empty parameter range");

  Rng rng(config.seed);
  const Index total = 2 * config.per_line + config.plane;
  DataMatrix data;
  data.points.resize(total, 3);
  data.labels.reserve(static_cast<std::size_t>(total));

  Index row = 0;
  for (Index i = 0; i < config.per_line; ++i, ++row) {
    data.points.row(row) = line1_map(rng.uniform(config.range_lo, config.range_hi));
    data.labels.push_back(1);
  }
  for (Index i = 0; i < config.per_line; ++i, ++row) {
    data.points.row(row) = line2_map(rng.uniform(config.range_lo, config.range_hi));
    data.labels.push_back(2);
  }
  for (Index i = 0; i < config.plane; ++i, ++row) {
    const double t = rng.uniform(config.range_lo, config.range_hi);
    const double s = rng.uniform(config.range_lo, config.range_hi);
    data.points.row(row) = plane_map(t, s);
    data.labels.push_back(3);
  }
  return data;
}

Matrix flatten_cube(const std::vector<double>& raw, const CubeDescriptor& desc) {
  if (desc.height < 1 || desc.width < 1 || desc.bands < 1)
    throw std::invalid_argument("flatten_cube: degenerate cube shape");
  const std::size_t expected = static_cast<std::size_t>(desc.height) *
                               static_cast<std::size_t>(desc.width) *
                               static_cast<std::size_t>(desc.bands);
  if (raw.size() != expected)
    throw DataError("flatten_cube: payload has " + std::to_string(raw.size()) +
                    " values, shape needs " + std::to_string(expected));

  Matrix m(desc.pixel_count(), desc.bands);
  for (Index p = 0; p < m.rows(); ++p)
    for (Index b = 0; b < desc.bands; ++b)
      m(p, b) = raw[static_cast<std::size_t>(p) * static_cast<std::size_t>(desc.bands) +
                    static_cast<std::size_t>(b)];
  return m;
}

}  // namespace hsap
