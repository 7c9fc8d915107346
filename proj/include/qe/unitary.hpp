#pragma once

// Haar sampling on U(d), Hilbert-Schmidt norms and the geodesic metric.

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qe/group.hpp"

namespace qe {

inline constexpr double kUnitaryInputTol = 1e-10;

inline double unitarity_defect(const CMatrix& u) {
  const CMatrix id = CMatrix::Identity(u.rows(), u.cols());
  return (u * u.adjoint() - id).cwiseAbs().maxCoeff();
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// diag(R) moved into Q. Without that correction the law is not Haar.
inline CMatrix haar_sample(std::size_t d, Stream& rng) {
  if (d == 0) fail(ErrorCode::ParamOutOfRange, "dimension must be positive");
  const auto n = Eigen::Index(d);
  CMatrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= a > 0 ? rjj / a : cplx(1);
  }
  return q;
}

inline double hs_norm(const CMatrix& a) {
  double s = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) s += std::norm(a(i, j));
  return std::sqrt(s);
}

/// Riemannian distance on U(d) for the Hilbert-Schmidt metric:
/// sqrt(sum theta_j^2) over the eigen-angles of U* V, angles in (-pi, pi].
inline double geodesic_distance(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.rows() != u.cols() || v.rows() != v.cols())
    fail(ErrorCode::LengthMismatch, "geodesic_distance needs square matrices of equal size");
  if (unitarity_defect(u) > kUnitaryInputTol || unitarity_defect(v) > kUnitaryInputTol)
    fail(ErrorCode::NotUnitary, "geodesic_distance needs unitary arguments");
  const CMatrix w = u.adjoint() * v;
  Eigen::ComplexEigenSolver<CMatrix> es(w, false);
  double s = 0;
  for (Eigen::Index j = 0; j < w.rows(); ++j) {
    double theta = std::arg(es.eigenvalues()[j]);
    if (theta <= -std::numbers::pi) theta = std::numbers::pi;
    s += theta * theta;
  }
  return std::sqrt(s);
}

/// The diagonal entry e_k* U* A U e_k.
inline cplx rotated_diagonal(const CMatrix& a, const CMatrix& u, Eigen::Index k) {
  const CVector col = u.col(k);
  return col.dot(a * col);  // Eigen's dot conjugates the left operand
}

struct SecondMoment {
  double empirical = 0;
  double exact = 0;
  double standard_error = 0;  // standard error of the empirical mean
  std::size_t trials = 0;
};

/// Monte Carlo estimate of E |e_k* U* A U e_k|^2 over Haar U, k cycling over
/// coordinates, against (||A||_HS^2 + |Tr A|^2) / (d (d + 1)).
inline SecondMoment second_moment_check(const CMatrix& a, std::size_t trials, Stream& rng) {
  if (a.rows() != a.cols() || a.rows() == 0) fail(ErrorCode::LengthMismatch, "second_moment_check needs a square matrix");
  if (trials == 0) fail(ErrorCode::ParamOutOfRange, "trials must be positive");
  const std::size_t d = std::size_t(a.rows());
  SecondMoment out;
  out.trials = trials;
  const double hs = hs_norm(a);
  out.exact = (hs * hs + std::norm(a.trace())) / double(d * (d + 1));
  double mean = 0, m2 = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const CMatrix u = haar_sample(d, rng);
    const double x = std::norm(rotated_diagonal(a, u, Eigen::Index(t % d)));
    const double delta = x - mean;
    mean += delta / double(t + 1);
    m2 += delta * (x - mean);
  }
  out.empirical = mean;
  out.standard_error = trials > 1 ? std::sqrt(m2 / double(trials - 1) / double(trials)) : 0.0;
  return out;
}

}  // namespace qe
