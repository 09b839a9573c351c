#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace hsap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// max |(QᵀQ - I)_{ij}|, the orthonormality defect of a column frame.
double orthonormality_defect(const Matrix& q);

bool is_orthonormal(const Matrix& q, double tol = 1e-8);

/// Thin SVD a = u * diag(sigma) * vᵀ. Singular values nonincreasing,
/// u and v have orthonormal columns.
struct SvdResult {
  Matrix u;
  Vector sigma;
  Matrix v;
};

SvdResult svd(const Matrix& a);

/// Smallest singular value with its left/right vectors: a * z = sigma * y.
struct SingularTriplet {
  double sigma = 0.0;
  Vector left;
  Vector right;
};

SingularTriplet smallest_singular_triplet(const Matrix& a);

/// Canonical angles between the column spans of two orthonormal frames,
/// nondecreasing in [0, pi/2]; u_vectors.col(i) in span(a) and
/// v_vectors.col(i) in span(b) realize angle i.
struct PrincipalAngleResult {
  Vector angles;
  Matrix u_vectors;
  Matrix v_vectors;
};

PrincipalAngleResult principal_angles(const Matrix& a, const Matrix& b);

/// Modified Gram-Schmidt. A column whose residual norm drops below tol is
/// replaced by the first canonical basis vector with residual above tol,
/// so the result always has full column rank. Throws std::invalid_argument
/// when cols > rows (no orthonormal completion exists).
Matrix mgs_orthonormalize(const Matrix& columns, double tol = 1e-10);

/// PCA dimension target: either a fixed dimension or the minimal dimension
/// whose cumulative squared-singular-value fraction reaches `energy`.
struct PcaTarget {
  static PcaTarget fixed(Index k) { return {k, std::nullopt}; }
  static PcaTarget energy(double e) { return {std::nullopt, e}; }
  std::optional<Index> fixed_dim;
  std::optional<double> energy_fraction;
};

struct PcaResult {
  Vector mean;      // zero vector when centering is off
  Matrix basis;     // n x d, orthonormal columns; d may be 0
  Vector spectrum;  // all singular values of the (optionally centered) data
};

/// Points are rows of `points`; the decomposition runs on the n x T
/// transpose, mean-centered when `center` is set.
PcaResult pca_basis(const Matrix& points, const PcaTarget& target,
                    bool center = true);

}  // namespace hsap
