#include "hsap/clustering.hpp"

#include "hsap/errors.hpp"
#include "hsap/parallel.hpp"
#include "hsap/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsap {

double cosine_distance(const Vector& u, const Vector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0)
    throw std::invalid_argument("cosine_distance: zero vector has no direction");
  return std::clamp(1.0 - u.dot(v) / (nu * nv), 0.0, 2.0);
}

namespace {

double point_to_centroid(const Matrix& points, const Matrix& unit_points, Index p,
                         const Matrix& centroids, Index c, Metric metric) {
  if (metric == Metric::Euclidean)
    return (points.row(p) - centroids.row(c)).norm();
  // Centroids are unit under the cosine metric, points pre-normalized.
  return std::clamp(1.0 - unit_points.row(p).dot(centroids.row(c)), 0.0, 2.0);
}

/// Distance-weighted seeding: each next centroid is drawn with probability
/// proportional to the squared distance to the nearest one chosen so far.
Matrix seed_centroids(const Matrix& points, const Matrix& unit_points, Index n_clusters,
                      Metric metric, Rng& rng) {
  const Index t = points.rows();
  Matrix centroids(n_clusters, points.cols());
  std::vector<double> nearest(static_cast<std::size_t>(t),
                              std::numeric_limits<double>::infinity());

  Index first = static_cast<Index>(rng.below(static_cast<std::uint64_t>(t)));
  centroids.row(0) = metric == Metric::Cosine ? unit_points.row(first) : points.row(first);

  for (Index c = 1; c < n_clusters; ++c) {
    double total = 0.0;
    for (Index p = 0; p < t; ++p) {
      const double d = point_to_centroid(points, unit_points, p, centroids, c - 1, metric);
      if (d < nearest[static_cast<std::size_t>(p)]) nearest[static_cast<std::size_t>(p)] = d;
      total += nearest[static_cast<std::size_t>(p)] * nearest[static_cast<std::size_t>(p)];
    }
    Index pick = 0;
    if (total > 0.0) {
      const double r = rng.uniform01() * total;
      double acc = 0.0;
      pick = t - 1;
      for (Index p = 0; p < t; ++p) {
        acc += nearest[static_cast<std::size_t>(p)] * nearest[static_cast<std::size_t>(p)];
        if (acc > r) {
          pick = p;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(t)));
    }
    centroids.row(c) = metric == Metric::Cosine ? unit_points.row(pick) : points.row(pick);
  }
  return centroids;
}

}  // namespace

KmeansResult kmeans(const Matrix& points, Index n_clusters, Metric metric,
                    std::uint64_t seed, Index max_iters, int threads) {
  const Index t = points.rows();
  if (n_clusters < 1) throw std::invalid_argument("kmeans: need at least one cluster");
  if (n_clusters > t)
    throw std::invalid_argument("kmeans: more clusters than points");

  Matrix unit_points;
  if (metric == Metric::Cosine) {
    unit_points = points;
    for (Index p = 0; p < t; ++p) {
      const double norm = unit_points.row(p).norm();
      if (norm == 0.0)
        throw DataError("kmeans: zero vector at row " + std::to_string(p) +
                        " under the cosine metric");
      unit_points.row(p) /= norm;
    }
  }

  Rng rng(seed);
  Matrix centroids = seed_centroids(points, unit_points, n_clusters, metric, rng);

  KmeansResult res;
  res.labels.assign(static_cast<std::size_t>(t), 0);
  std::vector<int> labels(static_cast<std::size_t>(t), -1);

  for (Index iter = 0; iter < max_iters; ++iter) {
    std::vector<int> next(static_cast<std::size_t>(t), 0);
    parallel_for(static_cast<std::size_t>(t), threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (Index c = 0; c < n_clusters; ++c) {
          const double d = point_to_centroid(points, unit_points, static_cast<Index>(p),
                                             centroids, c, metric);
          if (d < best) {
            best = d;
            best_c = static_cast<int>(c);
          }
        }
        next[p] = best_c;
      }
    });

    // A cluster with no members steals the point farthest from its own
    // centroid, leaving no cluster empty.
    std::vector<Index> counts(static_cast<std::size_t>(n_clusters), 0);
    for (const int c : next) ++counts[static_cast<std::size_t>(c)];
    for (Index c = 0; c < n_clusters; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      double worst = -1.0;
      Index steal = -1;
      for (Index p = 0; p < t; ++p) {
        const int owner = next[static_cast<std::size_t>(p)];
        if (counts[static_cast<std::size_t>(owner)] < 2) continue;
        const double d = point_to_centroid(points, unit_points, p, centroids, owner, metric);
        if (d > worst) {
          worst = d;
          steal = p;
        }
      }
      if (steal < 0) continue;
      --counts[static_cast<std::size_t>(next[static_cast<std::size_t>(steal)])];
      next[static_cast<std::size_t>(steal)] = static_cast<int>(c);
      ++counts[static_cast<std::size_t>(c)];
    }

    if (next == labels) break;
    labels = next;

    // Deterministic reduction: member sums accumulate in row order.
    Matrix sums = Matrix::Zero(n_clusters, points.cols());
    for (Index p = 0; p < t; ++p) {
      if (metric == Metric::Cosine)
        sums.row(labels[static_cast<std::size_t>(p)]) += unit_points.row(p);
      else
        sums.row(labels[static_cast<std::size_t>(p)]) += points.row(p);
    }
    for (Index c = 0; c < n_clusters; ++c) {
      if (metric == Metric::Euclidean) {
        centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        const double norm = sums.row(c).norm();
        if (norm > 0.0) centroids.row(c) = sums.row(c) / norm;
      }
    }

    double objective = 0.0;
    for (Index p = 0; p < t; ++p)
      objective += point_to_centroid(points, unit_points, p, centroids,
                                     labels[static_cast<std::size_t>(p)], metric);
    res.objective.push_back(objective);
    ++res.iterations;
  }

  for (Index p = 0; p < t; ++p)
    res.labels[static_cast<std::size_t>(p)] = labels[static_cast<std::size_t>(p)] + 1;
  res.centroids = std::move(centroids);
  return res;
}

std::vector<Index> select_anchors(const Matrix& cluster_points, Index count,
                                  AnchorStrategy strategy, std::uint64_t seed) {
  const Index t = cluster_points.rows();
  if (count < 1 || count > t)
    throw std::invalid_argument("select_anchors: count must lie in [1, cluster size]");

  if (strategy == AnchorStrategy::Random) {
    Rng rng(seed);
    std::vector<Index> idx(static_cast<std::size_t>(t));
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index i = 0; i < count; ++i) {
      const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(t - i)));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(count));
    return idx;
  }

  // Farthest-point greedy; ties break to the lowest row index via strict >.
  const Vector mean = cluster_points.colwise().mean();
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(count));
  std::vector<double> min_dist(static_cast<std::size_t>(t));

  Index best = 0;
  double best_d = -1.0;
  for (Index p = 0; p < t; ++p) {
    const double d = (cluster_points.row(p).transpose() - mean).norm();
    if (d > best_d) {
      best_d = d;
      best = p;
    }
  }
  chosen.push_back(best);
  for (Index p = 0; p < t; ++p)
    min_dist[static_cast<std::size_t>(p)] =
        (cluster_points.row(p) - cluster_points.row(best)).norm();

  while (static_cast<Index>(chosen.size()) < count) {
    best = 0;
    best_d = -1.0;
    for (Index p = 0; p < t; ++p) {
      if (min_dist[static_cast<std::size_t>(p)] > best_d) {
        best_d = min_dist[static_cast<std::size_t>(p)];
        best = p;
      }
    }
    chosen.push_back(best);
    for (Index p = 0; p < t; ++p)
      min_dist[static_cast<std::size_t>(p)] =
          std::min(min_dist[static_cast<std::size_t>(p)],
                   (cluster_points.row(p) - cluster_points.row(best)).norm());
  }
  return chosen;
}

ClusterModel build_cluster_model(const Matrix& cluster_points,
                                 const ClusterModelParams& params,
                                 const std::vector<Index>& global_ids) {
  const Index t = cluster_points.rows();
  if (t < 1) throw std::invalid_argument("build_cluster_model: empty cluster");
  if (!global_ids.empty() && static_cast<Index>(global_ids.size()) != t)
    throw std::invalid_argument("build_cluster_model: global id count mismatch");

  ClusterModel model;
  model.index = params.cluster_index;
  model.members = global_ids;

  if (params.mode == ClusterMode::Linear) {
    const Index cap = std::max<Index>(params.projection_dim - 1, 0);
    if (params.fixed_dim) {
      const Index want = *params.fixed_dim;
      const Index use = std::min(want, cap);
      model.basis_capped = want > cap;
      const PcaResult pca = pca_basis(cluster_points, PcaTarget::fixed(use), true);
      model.basis = pca.basis;
      model.mean = pca.mean;
    } else {
      const PcaResult pca = pca_basis(cluster_points, PcaTarget::energy(params.energy), true);
      model.basis_capped = pca.basis.cols() > cap;
      model.basis = pca.basis.leftCols(std::min<Index>(pca.basis.cols(), cap));
      model.mean = pca.mean;
    }
  } else {
    if (t < 2) {
      model.empty_within = true;
      model.within.directions.resize(0, cluster_points.cols());
    } else {
      model.within = sample_within_secants(cluster_points, params.within_count,
                                           params.secant_seed, params.cap);
      for (SecantProvenance& p : model.within.provenance) {
        p.cluster_a = p.cluster_b = params.cluster_index;
        if (!global_ids.empty()) {
          p.src_a = global_ids[static_cast<std::size_t>(p.src_a)];
          p.src_b = global_ids[static_cast<std::size_t>(p.src_b)];
        }
      }
    }
  }

  if (params.anchor_count > 0) {
    const Index count = std::min(params.anchor_count, t);
    model.anchors = select_anchors(cluster_points, count, params.anchor_strategy,
                                   params.anchor_seed);
    if (!global_ids.empty())
      for (Index& a : model.anchors) a = global_ids[static_cast<std::size_t>(a)];
  }
  return model;
}

}  // namespace hsap
