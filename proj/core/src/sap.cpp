#include "hsap/sap.hpp"

#include "hsap/errors.hpp"

#include <stdexcept>

namespace hsap {

Matrix sap_step(const Matrix& p, const SecantSet& secants, double alpha, int threads) {
  if (secants.size() == 0) throw std::invalid_argument("sap_step: empty secant set");
  const auto [value, row] = min_projected_length(p, secants.directions, threads);
  return update_projection(p, secant_candidate(p, secants, row, value), alpha);
}

SapResult sap_run(const DataMatrix& data, Index k, double alpha, Index iters,
                  InitStrategy init, std::uint64_t seed, std::uint64_t cap,
                  int threads) {
  if (iters < 0) throw std::invalid_argument("sap_run: negative iteration count");
  if (data.points.rows() < 2)
    throw DataError("sap_run: need at least two distinct points");
  const SecantSet secants = full_secants(data.points, cap);
  if (secants.size() == 0)
    throw DataError("sap_run: need at least two distinct points");

  SapResult res;
  res.projection = init_projection(data.points, k, init, seed);
  res.trace.reserve(static_cast<std::size_t>(iters) + 1);
  for (Index i = 0;; ++i) {
    const auto [value, row] = min_projected_length(res.projection, secants.directions,
                                                   threads);
    res.trace.push_back({i, value, CandidateKind::Secant, row});
    if (i == iters) break;
    res.projection = update_projection(
        res.projection, secant_candidate(res.projection, secants, row, value), alpha);
  }
  return res;
}

}  // namespace hsap
