#pragma once

#include "hsap/clustering.hpp"
#include "hsap/dataset.hpp"
#include "hsap/linalg.hpp"
#include "hsap/secant.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hsap {

/// What produced the worst-preserved direction: the smallest singular value
/// of PᵀV_j for some cluster basis, or a secant from the evaluation pool.
enum class CandidateKind { ClusterSingularValue, Secant };

const char* candidate_kind_name(CandidateKind kind);

/// The minimizer of the candidate set with everything the update needs:
/// the unit representative w and its stand-in w_p inside span(P).
struct Candidate {
  double value = 0.0;
  Vector w;
  Vector w_p;
  CandidateKind kind = CandidateKind::Secant;
  Index source = 0;  // cluster index, or row in the secant pool
};

struct TraceRecord {
  Index iteration = 0;
  double objective = 0.0;
  CandidateKind kind = CandidateKind::Secant;
  Index source = 0;
};

enum class InitStrategy { Pca, Random };

struct HsapConfig {
  Index k = 2;                  // projection dimension
  Index clusters = 1;           // N
  ClusterMode mode = ClusterMode::Linear;
  double alpha = 0.01;          // shift size, in (0, 1)
  Index max_iters = 80;
  Index anchor_count = 20;      // per-cluster anchors; 0 skips cross secants
  AnchorStrategy anchor_strategy = AnchorStrategy::Random;
  double energy = 0.95;                   // linear mode basis energy
  std::optional<Index> fixed_cluster_dim; // overrides the energy rule
  std::uint64_t within_count = 1000;      // secant mode sample size; 0 = all
  Metric metric = Metric::Euclidean;
  InitStrategy init = InitStrategy::Pca;
  std::uint64_t seed = 42;      // master seed; sub-streams are derived
  std::vector<int> labels;      // 1..N per point; empty = cluster internally
  Index kmeans_max_iters = 100;
  double stop_tol = 1e-6;       // trailing-window mean test; 0 disables
  Index stop_window = 20;
  std::uint64_t cap = kDefaultSecantCap;
  bool full_svd = false;        // full decompositions instead of the
                                // smallest-triplet path, for cross-checks
  int threads = 0;              // 0 = machine parallelism
};

struct HsapReport {
  double final_objective = 0.0;
  double bilipschitz_a = 0.0;
  Index iterations_run = 0;
  double wall_time_ms = 0.0;
};

struct HsapResult {
  Matrix projection;  // n x k, orthonormal columns
  std::vector<TraceRecord> trace;
  HsapReport report;
  std::vector<std::string> warnings;
};

/// Pca: the first k left singular vectors of the raw n x T data transpose.
/// Random: orthonormalized seeded Gaussian matrix.
Matrix init_projection(const Matrix& points, Index k, InitStrategy strategy,
                       std::uint64_t seed);

/// Minimum projected length over the pool rows with its row index; ties go
/// to the lowest row. Thread count never changes the result.
std::pair<double, Index> min_projected_length(const Matrix& p, const Matrix& secants,
                                              int threads = 1);

/// Assembles the secant candidate for a pool row, with the value already
/// measured by min_projected_length.
Candidate secant_candidate(const Matrix& p, const SecantSet& pool, Index row,
                           double value);

/// The minimum of the candidate set: per-cluster smallest singular values
/// of PᵀV_j, then projected pool secant lengths. Exact ties resolve to the
/// earliest cluster, then the earliest pool row.
Candidate evaluate_candidates(const Matrix& p, const std::vector<ClusterModel>& models,
                              const SecantSet& pool, bool full_svd = false,
                              int threads = 1);

/// One frame update: swap the column most aligned with w to the front seat
/// (occupied by normalized w_p), re-span via modified Gram-Schmidt, shift
/// the first column by alpha toward w, re-orthonormalize. A representative
/// with ‖w_p‖ below the degeneracy tolerance instead shifts the first
/// column directly.
Matrix update_projection(const Matrix& p, const Candidate& cand, double alpha);

inline constexpr double kDegeneracyTol = 1e-10;

/// min over the set of ‖Pᵀs‖: the empirical lower bi-Lipschitz constant of
/// the projection on these secants.
double bilipschitz_lower_bound(const Matrix& p, const SecantSet& secants,
                               int threads = 1);

/// Owns one run's state: cluster models, the secant pool, the frame, and
/// the per-iteration trace. step() performs evaluate + record + update and
/// reports false once the stopping rule fires.
class HsapEngine {
 public:
  HsapEngine(const DataMatrix& data, const HsapConfig& config);

  bool step();
  Candidate evaluate() const;

  const Matrix& projection() const { return p_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  const SecantSet& pool() const { return pool_; }
  const std::vector<ClusterModel>& models() const { return models_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  HsapConfig config_;
  std::vector<int> labels_;
  std::vector<ClusterModel> models_;
  SecantSet pool_;
  Matrix p_;
  std::vector<TraceRecord> trace_;
  std::vector<std::string> warnings_;
};

/// Cluster, model, pool, init, iterate. The trace records the candidate
/// chosen at each frame before its update; the report's final objective is
/// a fresh evaluation of the returned frame.
HsapResult run_hsap(const DataMatrix& data, const HsapConfig& config);

struct ProfileEntry {
  Index k = 0;
  double final_objective = 0.0;
};

/// Runs run_hsap for every k in [k_min, k_max] with the rest of the config
/// unchanged, collecting the final objective per dimension.
std::vector<ProfileEntry> dimension_sweep(const DataMatrix& data, const HsapConfig& base,
                                          Index k_min, Index k_max);

}  // namespace hsap
