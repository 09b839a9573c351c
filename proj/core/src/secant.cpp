#include "hsap/secant.hpp"

#include "hsap/dataset.hpp"
#include "hsap/errors.hpp"
#include "hsap/rng.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace hsap {

namespace {

/// Normalizes in place and flips the sign so the first nonzero coordinate
/// is positive. Returns false for an exactly zero difference.
bool canonicalize(Vector& v) {
  const double norm = v.norm();
  if (norm == 0.0) return false;
  v /= norm;
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return true;
}

struct SecantBuilder {
  explicit SecantBuilder(Index n, Index capacity) : set(), row(0) {
    set.directions.resize(capacity, n);
    set.provenance.reserve(static_cast<std::size_t>(capacity));
  }

  void add(Vector diff, const SecantProvenance& prov) {
    if (!canonicalize(diff)) {
      ++set.dropped;
      return;
    }
    set.directions.row(row++) = diff;
    set.provenance.push_back(prov);
  }

  SecantSet finish() {
    set.directions.conservativeResize(row, Eigen::NoChange);
    return std::move(set);
  }

  SecantSet set;
  Index row;
};

/// Number of pairs (x, y), x < y < t, whose first element is below a.
std::uint64_t pair_offset(std::uint64_t a, std::uint64_t t) {
  return a * (2 * t - a - 1) / 2;
}

}  // namespace

std::uint64_t full_secant_count(std::uint64_t t) {
  if (t < 2) return 0;
  // One of t, t-1 is even, so divide that one first to dodge overflow.
  return (t % 2 == 0) ? (t / 2) * (t - 1) : t * ((t - 1) / 2);
}

SecantSet full_secants(const Matrix& points, std::uint64_t cap) {
  const Index t = points.rows();
  if (t < 2) throw std::invalid_argument("full_secants: need at least two points");
  const std::uint64_t count = full_secant_count(static_cast<std::uint64_t>(t));
  if (count > cap)
    throw DataError("full secant set has " + std::to_string(count) +
                    " elements, above the materialization cap of " + std::to_string(cap) +
                    "; use the hierarchical path instead");

  SecantBuilder builder(points.cols(), static_cast<Index>(count));
  for (Index a = 0; a + 1 < t; ++a)
    for (Index b = a + 1; b < t; ++b)
      builder.add(points.row(b) - points.row(a), {-1, -1, a, b});
  return builder.finish();
}

SecantSet cross_secants(const std::vector<AnchorSet>& anchors, std::uint64_t cap) {
  if (anchors.size() < 2)
    throw std::invalid_argument("cross_secants: need at least two anchor sets");
  Index n = -1;
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const AnchorSet& a = anchors[i];
    if (a.points.rows() < 1)
      throw std::invalid_argument("cross_secants: empty anchor set");
    if (a.ids.size() != static_cast<std::size_t>(a.points.rows()))
      throw std::invalid_argument("cross_secants: anchor ids do not match point count");
    if (n < 0) n = a.points.cols();
    if (a.points.cols() != n)
      throw std::invalid_argument("cross_secants: ambient dimensions differ");
    for (std::size_t j = i + 1; j < anchors.size(); ++j)
      count += static_cast<std::uint64_t>(a.points.rows()) *
               static_cast<std::uint64_t>(anchors[j].points.rows());
  }
  if (count > cap)
    throw DataError("cross secant set has " + std::to_string(count) +
                    " elements, above the materialization cap of " + std::to_string(cap));

  SecantBuilder builder(n, static_cast<Index>(count));
  for (std::size_t i = 0; i < anchors.size(); ++i)
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      const AnchorSet& ai = anchors[i];
      const AnchorSet& aj = anchors[j];
      for (Index a = 0; a < ai.points.rows(); ++a)
        for (Index b = 0; b < aj.points.rows(); ++b)
          builder.add(aj.points.row(b) - ai.points.row(a),
                      {ai.cluster, aj.cluster, ai.ids[static_cast<std::size_t>(a)],
                       aj.ids[static_cast<std::size_t>(b)]});
    }
  return builder.finish();
}

SecantSet sample_within_secants(const Matrix& cluster_points, std::uint64_t m,
                                std::uint64_t seed, std::uint64_t cap) {
  const Index t = cluster_points.rows();
  if (t < 2)
    throw std::invalid_argument("sample_within_secants: need at least two points");
  const std::uint64_t total = full_secant_count(static_cast<std::uint64_t>(t));
  if (m == 0 || m >= total) {
    return full_secants(cluster_points, cap);
  }
  if (m > cap)
    throw DataError("requested " + std::to_string(m) +
                    " within-cluster secants, above the materialization cap of " +
                    std::to_string(cap));

  // Floyd's sampling: m distinct pair ranks out of [0, total).
  Rng rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(m) * 2);
  for (std::uint64_t j = total - m; j < total; ++j) {
    const std::uint64_t r = rng.below(j + 1);
    if (!chosen.insert(r).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> ranks(chosen.begin(), chosen.end());
  std::sort(ranks.begin(), ranks.end());

  SecantBuilder builder(cluster_points.cols(), static_cast<Index>(ranks.size()));
  std::uint64_t a = 0;
  for (const std::uint64_t r : ranks) {
    while (pair_offset(a + 1, static_cast<std::uint64_t>(t)) <= r) ++a;
    const std::uint64_t b = a + 1 + (r - pair_offset(a, static_cast<std::uint64_t>(t)));
    builder.add(cluster_points.row(static_cast<Index>(b)) -
                    cluster_points.row(static_cast<Index>(a)),
                {-1, -1, static_cast<Index>(a), static_cast<Index>(b)});
  }
  return builder.finish();
}

void save_secants(const SecantSet& set, const std::string& matrix_path,
                  const std::string& sidecar_path) {
  if (set.size() == 0) throw std::invalid_argument("save_secants: empty set");
  save_matrix(set.directions, matrix_path, FileFormat::Binary);

  std::string csv = "i,j,src_a,src_b\n";
  for (const SecantProvenance& p : set.provenance) {
    csv += std::to_string(p.cluster_a);
    csv.push_back(',');
    csv += std::to_string(p.cluster_b);
    csv.push_back(',');
    csv += std::to_string(p.src_a);
    csv.push_back(',');
    csv += std::to_string(p.src_b);
    csv.push_back('\n');
  }
  const std::string tmp = sidecar_path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp);
    out << csv;
    if (!out) throw DataError("write failure on " + tmp);
  }
  std::filesystem::rename(tmp, sidecar_path);
}

SecantSet load_secants(const std::string& matrix_path, const std::string& sidecar_path) {
  SecantSet set;
  set.directions = load_matrix(matrix_path, FileFormat::Binary);

  std::ifstream in(sidecar_path);
  if (!in) throw DataError("cannot open " + sidecar_path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("i,j,src_a,src_b", 0) != 0)
    throw DataError("bad provenance header in " + sidecar_path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SecantProvenance p;
    long long f[4] = {0, 0, 0, 0};
    const char* ptr = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 4; ++k) {
      const auto res = std::from_chars(ptr, end, f[k]);
      if (res.ec != std::errc() || (k < 3 && (res.ptr == end || *res.ptr != ',')))
        throw DataError("bad provenance row in " + sidecar_path + ": " + line);
      ptr = res.ptr + (k < 3 ? 1 : 0);
    }
    p.cluster_a = static_cast<int>(f[0]);
    p.cluster_b = static_cast<int>(f[1]);
    p.src_a = static_cast<Index>(f[2]);
    p.src_b = static_cast<Index>(f[3]);
    set.provenance.push_back(p);
  }
  if (static_cast<Index>(set.provenance.size()) != set.size())
    throw DataError("provenance rows do not match secant count in " + sidecar_path);
  return set;
}

}  // namespace hsap
