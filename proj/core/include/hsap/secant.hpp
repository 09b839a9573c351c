#pragma once

#include "hsap/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hsap {

/// Where a secant came from: the cluster pair (equal for within-cluster
/// secants, -1 when no clustering is involved) and the two source rows.
struct SecantProvenance {
  int cluster_a = -1;
  int cluster_b = -1;
  Index src_a = 0;
  Index src_b = 0;
};

/// Unit-normalized difference vectors, one per row, with the sign convention
/// that the first nonzero coordinate is nonnegative. Pairs of identical
/// points have no direction; they are dropped and counted.
struct SecantSet {
  Matrix directions;  // rows are unit vectors in R^n
  std::vector<SecantProvenance> provenance;
  Index dropped = 0;

  Index size() const { return directions.rows(); }
};

/// T(T-1)/2 without materializing anything.
std::uint64_t full_secant_count(std::uint64_t t);

inline constexpr std::uint64_t kDefaultSecantCap = 5'000'000;

/// Every unordered pair of distinct points, in lexicographic (a, b) order.
/// Refuses to materialize more than `cap` secants.
SecantSet full_secants(const Matrix& points, std::uint64_t cap = kDefaultSecantCap);

/// One cluster's anchor sample: the anchor points as rows, their row ids in
/// the full data set, and the cluster index the provenance should carry.
struct AnchorSet {
  Matrix points;
  std::vector<Index> ids;
  int cluster = -1;
};

/// All secants between anchor sets of different clusters, ordered by
/// (cluster pair, first anchor, second anchor). Needs at least two sets.
SecantSet cross_secants(const std::vector<AnchorSet>& anchors,
                        std::uint64_t cap = kDefaultSecantCap);

/// m index pairs drawn uniformly without replacement from the T(T-1)/2
/// unordered pairs, emitted in lexicographic order; m = 0 or m >= pair
/// count yields every pair (matching full_secants row for row).
SecantSet sample_within_secants(const Matrix& cluster_points, std::uint64_t m,
                                std::uint64_t seed,
                                std::uint64_t cap = kDefaultSecantCap);

/// Directions go to the binary matrix format; provenance goes to a CSV
/// sidecar with header i,j,src_a,src_b.
void save_secants(const SecantSet& set, const std::string& matrix_path,
                  const std::string& sidecar_path);
SecantSet load_secants(const std::string& matrix_path,
                       const std::string& sidecar_path);

}  // namespace hsap
