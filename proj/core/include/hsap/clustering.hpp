#pragma once

#include "hsap/linalg.hpp"
#include "hsap/secant.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hsap {

enum class Metric { Euclidean, Cosine };

/// 1 - cos(angle between u and v), in [0, 2]. Zero vectors have no angle.
double cosine_distance(const Vector& u, const Vector& v);

struct KmeansResult {
  std::vector<int> labels;        // one of 1..N per point
  Matrix centroids;               // N x n
  std::vector<double> objective;  // sum of point-to-centroid distances, per Lloyd iteration
  Index iterations = 0;
};

/// Lloyd iterations from distance-weighted seeding, until the assignment
/// reaches a fixpoint or max_iters. Deterministic per seed for any thread
/// count. Cosine metric: centroids are normalized member means; a cluster
/// that empties is reseeded from the point farthest from its own centroid.
KmeansResult kmeans(const Matrix& points, Index n_clusters, Metric metric,
                    std::uint64_t seed, Index max_iters = 100, int threads = 1);

enum class AnchorStrategy { Random, Extremal };

/// Random: uniform sample without replacement. Extremal: farthest-point
/// greedy under Euclidean distance, starting from the point farthest from
/// the cluster mean; ties always break to the lowest row index. Returned
/// in selection order.
std::vector<Index> select_anchors(const Matrix& cluster_points, Index count,
                                  AnchorStrategy strategy, std::uint64_t seed);

enum class ClusterMode { Linear, Secants };

struct ClusterModelParams {
  ClusterMode mode = ClusterMode::Linear;
  int cluster_index = 0;
  Index projection_dim = 2;           // k; basis width is capped at k - 1
  std::optional<Index> fixed_dim;     // overrides the energy rule when set
  double energy = 0.95;
  std::uint64_t within_count = 1000;  // secant mode sample size; 0 = every pair
  std::uint64_t secant_seed = 0;
  Index anchor_count = 20;            // clamped to the cluster size; 0 = none
  AnchorStrategy anchor_strategy = AnchorStrategy::Random;
  std::uint64_t anchor_seed = 0;
  std::uint64_t cap = kDefaultSecantCap;
};

/// One cluster's stand-in for its secant structure: an orthonormal basis of
/// the mean-centered principal subspace (linear mode) or a sample of its
/// secants (secant mode), plus anchor points for cross-cluster secants.
struct ClusterModel {
  int index = 0;
  std::vector<Index> members;  // rows of the full data set; empty when unknown
  Matrix basis;                // linear mode; n x k_j with k_j possibly 0
  Vector mean;                 // linear mode centering
  SecantSet within;            // secant mode
  std::vector<Index> anchors;  // global rows when members are known, else local
  bool basis_capped = false;   // the k-1 cap cut the energy/fixed choice short
  bool empty_within = false;   // secant mode on a singleton cluster
};

/// `global_ids`, when nonempty, maps cluster rows to rows of the full data
/// set; anchors and secant provenance then carry global indices.
ClusterModel build_cluster_model(const Matrix& cluster_points,
                                 const ClusterModelParams& params,
                                 const std::vector<Index>& global_ids = {});

}  // namespace hsap
