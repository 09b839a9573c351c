#include "hsap/engine.hpp"

#include "hsap/errors.hpp"
#include "hsap/parallel.hpp"
#include "hsap/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hsap {

const char* candidate_kind_name(CandidateKind kind) {
  return kind == CandidateKind::ClusterSingularValue ? "cluster-singular-value"
                                                     : "cross-secant";
}

Matrix init_projection(const Matrix& points, Index k, InitStrategy strategy,
                       std::uint64_t seed) {
  const Index n = points.cols();
  if (k < 1 || k > n)
    throw std::invalid_argument("init_projection: dimension must lie in [1, n]");

  if (strategy == InitStrategy::Pca) {
    return pca_basis(points, PcaTarget::fixed(k), false).basis;
  }
  Rng rng(seed);
  Matrix g(n, k);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < k; ++j) g(i, j) = rng.normal();
  return mgs_orthonormalize(g);
}

std::pair<double, Index> min_projected_length(const Matrix& p, const Matrix& secants,
                                              int threads) {
  const Index count = secants.rows();
  if (count == 0) return {std::numeric_limits<double>::infinity(), -1};

  std::vector<double> vals(static_cast<std::size_t>(count));
  parallel_for(static_cast<std::size_t>(count), threads,
               [&](std::size_t lo, std::size_t hi) {
                 for (std::size_t r = lo; r < hi; ++r)
                   vals[r] = (secants.row(static_cast<Index>(r)) * p).norm();
               });

  Index best = 0;
  for (Index r = 1; r < count; ++r)
    if (vals[static_cast<std::size_t>(r)] < vals[static_cast<std::size_t>(best)]) best = r;
  return {vals[static_cast<std::size_t>(best)], best};
}

Candidate secant_candidate(const Matrix& p, const SecantSet& pool, Index row,
                           double value) {
  Candidate cand;
  cand.value = value;
  cand.w = pool.directions.row(row).transpose();
  cand.w_p = p * (p.transpose() * cand.w);
  cand.kind = CandidateKind::Secant;
  cand.source = row;
  return cand;
}

Candidate evaluate_candidates(const Matrix& p, const std::vector<ClusterModel>& models,
                              const SecantSet& pool, bool full_svd, int threads) {
  Candidate best;
  best.value = std::numeric_limits<double>::infinity();
  bool found = false;

  for (std::size_t j = 0; j < models.size(); ++j) {
    const Matrix& basis = models[j].basis;
    if (basis.cols() == 0) continue;
    if (basis.rows() != p.rows())
      throw std::invalid_argument("evaluate_candidates: basis dimension mismatch");

    const Matrix overlap = p.transpose() * basis;
    SingularTriplet triplet;
    if (full_svd) {
      const SvdResult dec = svd(overlap);
      const Index q = dec.sigma.size() - 1;
      triplet = {dec.sigma(q), dec.u.col(q), dec.v.col(q)};
    } else {
      triplet = smallest_singular_triplet(overlap);
    }
    if (triplet.sigma < best.value) {
      best.value = triplet.sigma;
      best.w = basis * triplet.right;
      best.w_p = p * triplet.left;
      best.kind = CandidateKind::ClusterSingularValue;
      best.source = static_cast<Index>(j);
      found = true;
    }
  }

  const auto [min_len, min_row] = min_projected_length(p, pool.directions, threads);
  if (min_row >= 0 && min_len < best.value) {
    best = secant_candidate(p, pool, min_row, min_len);
    found = true;
  }

  if (!found)
    throw std::invalid_argument("evaluate_candidates: empty candidate set");
  return best;
}

Matrix update_projection(const Matrix& p, const Candidate& cand, double alpha) {
  const Index n = p.rows();
  const Index k = p.cols();
  if (cand.w.size() != n || cand.w_p.size() != n)
    throw std::invalid_argument("update_projection: candidate dimension mismatch");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("update_projection: alpha must lie in [0, 1)");

  const double wp_norm = cand.w_p.norm();

  // Representative invisible to the frame: shift the first column toward it
  // and rebuild from scratch.
  if (wp_norm <= kDegeneracyTol) {
    Matrix shifted = p;
    shifted.col(0) = (1.0 - alpha) * p.col(0) + alpha * cand.w;
    return mgs_orthonormalize(shifted);
  }

  const Vector resid = cand.w_p - p * (p.transpose() * cand.w_p);
  if (resid.norm() > 1e-8 * std::max(1.0, wp_norm))
    throw std::invalid_argument(
        "update_projection: stale candidate, w_p is outside span(P)");

  // Column to retire: the one most aligned with w, lowest index on ties.
  const Vector scores = (p.transpose() * cand.w).cwiseAbs();
  Index t = 0;
  for (Index q = 1; q < k; ++q)
    if (scores(q) > scores(t)) t = q;

  Matrix seq(n, k);
  seq.col(0) = cand.w_p / wp_norm;
  Index col = 1;
  for (Index q = 0; q < k; ++q)
    if (q != t) seq.col(col++) = p.col(q);

  Matrix phat = mgs_orthonormalize(seq);

  const Vector p1 = phat.col(0);
  const Vector shifted = (1.0 - alpha) * p1 + alpha * (cand.w - p1);
  const double shifted_norm = shifted.norm();
  if (shifted_norm == 0.0)
    throw NumericalError("update_projection: shifted column collapsed to zero");
  phat.col(0) = shifted / shifted_norm;

  return mgs_orthonormalize(phat);
}

double bilipschitz_lower_bound(const Matrix& p, const SecantSet& secants, int threads) {
  if (secants.size() == 0)
    throw std::invalid_argument("bilipschitz_lower_bound: empty secant set");
  return min_projected_length(p, secants.directions, threads).first;
}

namespace {

void append_secants(SecantSet& dst, const SecantSet& src) {
  if (src.size() == 0) return;
  if (dst.size() == 0) {
    dst.directions = src.directions;
    dst.provenance = src.provenance;
  } else {
    const Index old = dst.directions.rows();
    dst.directions.conservativeResize(old + src.size(), Eigen::NoChange);
    dst.directions.bottomRows(src.size()) = src.directions;
    dst.provenance.insert(dst.provenance.end(), src.provenance.begin(),
                          src.provenance.end());
  }
  dst.dropped += src.dropped;
}

}  // namespace

HsapEngine::HsapEngine(const DataMatrix& data, const HsapConfig& config)
    : config_(config) {
  const Index t = data.points.rows();
  const Index n = data.points.cols();
  const Index nc = config_.clusters;
  if (t < 1) throw std::invalid_argument("hsap: empty data set");
  if (config_.k < 1 || config_.k > n)
    throw std::invalid_argument("hsap: projection dimension must lie in [1, n]");
  if (!(config_.alpha > 0.0 && config_.alpha < 1.0))
    throw std::invalid_argument("hsap: alpha must lie in (0, 1)");
  if (nc < 1 || nc > t)
    throw std::invalid_argument("hsap: cluster count must lie in [1, point count]");
  if (config_.max_iters < 0)
    throw std::invalid_argument("hsap: negative iteration count");

  if (!config_.labels.empty()) {
    if (static_cast<Index>(config_.labels.size()) != t)
      throw DataError("hsap: label count does not match point count");
    for (const int l : config_.labels)
      if (l < 1 || l > nc)
        throw DataError("hsap: label " + std::to_string(l) + " outside 1.." +
                        std::to_string(nc));
    labels_ = config_.labels;
  } else if (nc == 1) {
    labels_.assign(static_cast<std::size_t>(t), 1);
  } else {
    labels_ = kmeans(data.points, nc, config_.metric, derive_seed(config_.seed, 1),
                     config_.kmeans_max_iters, config_.threads)
                  .labels;
  }

  std::vector<std::vector<Index>> members(static_cast<std::size_t>(nc));
  for (Index p = 0; p < t; ++p)
    members[static_cast<std::size_t>(labels_[static_cast<std::size_t>(p)] - 1)].push_back(p);
  for (Index j = 0; j < nc; ++j)
    if (members[static_cast<std::size_t>(j)].empty())
      throw DataError("hsap: cluster " + std::to_string(j + 1) + " has no members");

  models_.reserve(static_cast<std::size_t>(nc));
  for (Index j = 0; j < nc; ++j) {
    const std::vector<Index>& rows = members[static_cast<std::size_t>(j)];
    Matrix cluster_points(static_cast<Index>(rows.size()), n);
    for (std::size_t r = 0; r < rows.size(); ++r)
      cluster_points.row(static_cast<Index>(r)) = data.points.row(rows[r]);

    ClusterModelParams params;
    params.mode = config_.mode;
    params.cluster_index = static_cast<int>(j);
    params.projection_dim = config_.k;
    params.fixed_dim = config_.fixed_cluster_dim;
    params.energy = config_.energy;
    params.within_count = config_.within_count;
    params.secant_seed = derive_seed(config_.seed, 200 + static_cast<std::uint64_t>(j));
    params.anchor_count = config_.anchor_count;
    params.anchor_strategy = config_.anchor_strategy;
    params.anchor_seed = derive_seed(config_.seed, 100 + static_cast<std::uint64_t>(j));
    params.cap = config_.cap;

    ClusterModel model = build_cluster_model(cluster_points, params, rows);
    if (model.basis_capped)
      warnings_.push_back("cluster " + std::to_string(j + 1) + ": basis capped at " +
                          std::to_string(config_.k - 1) + " columns");
    if (model.empty_within)
      warnings_.push_back("cluster " + std::to_string(j + 1) +
                          ": single point, no within-cluster secants");
    if (config_.anchor_count > 0 &&
        static_cast<Index>(model.anchors.size()) < config_.anchor_count)
      warnings_.push_back("cluster " + std::to_string(j + 1) + ": only " +
                          std::to_string(model.anchors.size()) + " anchors available");
    models_.push_back(std::move(model));
  }

  pool_.directions.resize(0, n);
  if (nc >= 2 && config_.anchor_count > 0) {
    std::vector<AnchorSet> sets;
    sets.reserve(models_.size());
    for (const ClusterModel& model : models_) {
      AnchorSet set;
      set.cluster = model.index;
      set.ids = model.anchors;
      set.points.resize(static_cast<Index>(model.anchors.size()), n);
      for (std::size_t a = 0; a < model.anchors.size(); ++a)
        set.points.row(static_cast<Index>(a)) = data.points.row(model.anchors[a]);
      sets.push_back(std::move(set));
    }
    append_secants(pool_, cross_secants(sets, config_.cap));
  }
  if (config_.mode == ClusterMode::Secants)
    for (const ClusterModel& model : models_) append_secants(pool_, model.within);
  if (pool_.dropped > 0)
    warnings_.push_back("dropped " + std::to_string(pool_.dropped) +
                        " zero-length secants");

  p_ = init_projection(data.points, config_.k, config_.init, derive_seed(config_.seed, 2));
}

Candidate HsapEngine::evaluate() const {
  return evaluate_candidates(p_, models_, pool_, config_.full_svd, config_.threads);
}

bool HsapEngine::step() {
  const Candidate cand = evaluate();
  trace_.push_back({static_cast<Index>(trace_.size()), cand.value, cand.kind, cand.source});
  p_ = update_projection(p_, cand, config_.alpha);

  const Index w = config_.stop_window;
  const Index have = static_cast<Index>(trace_.size());
  if (config_.stop_tol > 0.0 && w > 0 && have >= 2 * w) {
    double recent = 0.0;
    double previous = 0.0;
    for (Index i = have - w; i < have; ++i)
      recent += trace_[static_cast<std::size_t>(i)].objective;
    for (Index i = have - 2 * w; i < have - w; ++i)
      previous += trace_[static_cast<std::size_t>(i)].objective;
    recent /= static_cast<double>(w);
    previous /= static_cast<double>(w);
    if (std::abs(recent - previous) / std::max(std::abs(previous), 1e-12) < config_.stop_tol)
      return false;
  }
  return true;
}

HsapResult run_hsap(const DataMatrix& data, const HsapConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  HsapEngine engine(data, config);
  for (Index i = 0; i < config.max_iters; ++i)
    if (!engine.step()) break;

  HsapResult res;
  res.projection = engine.projection();
  res.trace = engine.trace();
  res.report.iterations_run = static_cast<Index>(res.trace.size());
  res.report.final_objective = engine.evaluate().value;
  res.report.bilipschitz_a =
      engine.pool().size() > 0
          ? bilipschitz_lower_bound(res.projection, engine.pool(), config.threads)
          : std::numeric_limits<double>::quiet_NaN();
  res.report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  res.warnings = engine.warnings();
  return res;
}

std::vector<ProfileEntry> dimension_sweep(const DataMatrix& data, const HsapConfig& base,
                                          Index k_min, Index k_max) {
  if (k_min < 1 || k_min > k_max || k_max > data.points.cols())
    throw std::invalid_argument("dimension_sweep: need 1 <= k_min <= k_max <= n");

  std::vector<ProfileEntry> profile;
  profile.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (Index k = k_min; k <= k_max; ++k) {
    HsapConfig config = base;
    config.k = k;
    const HsapResult res = run_hsap(data, config);
    profile.push_back({k, res.report.final_objective});
  }
  return profile;
}

}  // namespace hsap
