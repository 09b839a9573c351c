#pragma once

#include "hsap/dataset.hpp"
#include "hsap/engine.hpp"
#include "hsap/secant.hpp"

#include <cstdint>
#include <vector>

namespace hsap {

/// One plain-SAP iteration: the worst-preserved secant (lowest row on ties)
/// drives the same frame update the hierarchical engine uses.
Matrix sap_step(const Matrix& p, const SecantSet& secants, double alpha,
                int threads = 1);

struct SapResult {
  Matrix projection;
  std::vector<TraceRecord> trace;  // iters + 1 entries: every frame, first to last
};

/// Materializes the full secant set (refusing above `cap` with a pointer to
/// the hierarchical path) and iterates sap_step. The trace records the
/// objective at the initial frame and after every update, so its last entry
/// is the objective of the returned projection.
SapResult sap_run(const DataMatrix& data, Index k, double alpha, Index iters,
                  InitStrategy init, std::uint64_t seed,
                  std::uint64_t cap = kDefaultSecantCap, int threads = 1);

}  // namespace hsap
