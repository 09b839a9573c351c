#include "hsap/linalg.hpp"

#include "hsap/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hsap {

double orthonormality_defect(const Matrix& q) {
  const Matrix gram = q.transpose() * q;
  const Matrix eye = Matrix::Identity(q.cols(), q.cols());
  return (gram - eye).cwiseAbs().maxCoeff();
}

bool is_orthonormal(const Matrix& q, double tol) {
  if (q.cols() == 0) return true;
  return orthonormality_defect(q) <= tol;
}

SvdResult svd(const Matrix& a) {
  // Jacobi is the accuracy workhorse for small problems; BDC scales.
  if (std::min(a.rows(), a.cols()) <= 32) {
    Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
  }
  Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

SingularTriplet smallest_singular_triplet(const Matrix& a) {
  const bool tall = a.rows() >= a.cols();
  const Matrix gram = tall ? Matrix(a.transpose() * a) : Matrix(a * a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Index last = gram.rows() - 1;
  const double lambda_min = eig.eigenvalues()(0);
  const double lambda_max = eig.eigenvalues()(last);

  // Near the null space sqrt(lambda) loses half the digits; a full Jacobi
  // SVD keeps tiny singular values accurate to machine precision.
  if (lambda_min < 1e-10 * std::max(1.0, lambda_max)) {
    const SvdResult full = svd(a);
    const Index q = full.sigma.size() - 1;
    return {full.sigma(q), full.u.col(q), full.v.col(q)};
  }

  const double sigma = std::sqrt(lambda_min);
  SingularTriplet t;
  t.sigma = sigma;
  if (tall) {
    t.right = eig.eigenvectors().col(0);
    t.left = a * t.right / sigma;
  } else {
    t.left = eig.eigenvectors().col(0);
    t.right = a.transpose() * t.left / sigma;
  }
  return t;
}

PrincipalAngleResult principal_angles(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("principal_angles: row counts differ");
  if (!is_orthonormal(a) || !is_orthonormal(b))
    throw std::invalid_argument("principal_angles: input columns not orthonormal");

  const SvdResult dec = svd(a.transpose() * b);
  const Index q = dec.sigma.size();

  PrincipalAngleResult res;
  res.angles.resize(q);
  res.u_vectors.resize(a.rows(), q);
  res.v_vectors.resize(b.rows(), q);
  for (Index i = 0; i < q; ++i) {
    // Roundoff can push a cosine past 1; clamp so arccos stays defined.
    const double c = std::clamp(dec.sigma(i), 0.0, 1.0);
    res.angles(i) = std::acos(c);
    res.u_vectors.col(i) = a * dec.u.col(i);
    res.v_vectors.col(i) = b * dec.v.col(i);
  }
  return res;
}

Matrix mgs_orthonormalize(const Matrix& columns, double tol) {
  const Index n = columns.rows();
  const Index m = columns.cols();
  if (m > n)
    throw std::invalid_argument(
        "mgs_orthonormalize: more columns than rows, no orthonormal frame exists");
  if (tol <= 0.0) throw std::invalid_argument("mgs_orthonormalize: tol must be positive");

  Matrix q(n, m);
  Index accepted = 0;

  auto residual_against_accepted = [&](Vector v) {
    for (Index j = 0; j < accepted; ++j) v -= q.col(j).dot(v) * q.col(j);
    return v;
  };

  for (Index c = 0; c < m; ++c) {
    Vector v = residual_against_accepted(columns.col(c));
    double norm = v.norm();
    if (norm < tol) {
      // Rank-deficient column: deterministic canonical replacement.
      bool replaced = false;
      for (Index e = 0; e < n && !replaced; ++e) {
        Vector cand = residual_against_accepted(Vector::Unit(n, e));
        const double cn = cand.norm();
        if (cn > tol) {
          v = std::move(cand);
          norm = cn;
          replaced = true;
        }
      }
      if (!replaced)
        throw NumericalError("mgs_orthonormalize: no canonical completion found");
    }
    q.col(accepted++) = v / norm;
  }
  return q;
}

PcaResult pca_basis(const Matrix& points, const PcaTarget& target, bool center) {
  const Index t = points.rows();
  const Index n = points.cols();
  if (t < 1) throw std::invalid_argument("pca_basis: need at least one point");
  if (!target.fixed_dim && !target.energy_fraction)
    throw std::invalid_argument("pca_basis: target has neither dimension nor energy");

  PcaResult res;
  res.mean = center ? Vector(points.colwise().mean()) : Vector(Vector::Zero(n));

  Matrix cols = points.transpose();  // n x T, one point per column
  if (center) cols.colwise() -= res.mean;

  const SvdResult dec = svd(cols);
  res.spectrum = dec.sigma;

  Index d = 0;
  if (target.fixed_dim) {
    d = *target.fixed_dim;
    if (d < 0 || d > std::min(n, t))
      throw std::invalid_argument("pca_basis: dimension exceeds min(rows, cols)");
  } else {
    const double e = *target.energy_fraction;
    if (!(e > 0.0 && e <= 1.0))
      throw std::invalid_argument("pca_basis: energy fraction must lie in (0, 1]");
    const double total = res.spectrum.squaredNorm();
    if (total > 0.0) {
      double cum = 0.0;
      for (Index i = 0; i < res.spectrum.size(); ++i) {
        cum += res.spectrum(i) * res.spectrum(i);
        if (cum >= e * total) {
          d = i + 1;
          break;
        }
      }
      if (d == 0) d = res.spectrum.size();
    }
  }
  res.basis = dec.u.leftCols(d);
  return res;
}

}  // namespace hsap
