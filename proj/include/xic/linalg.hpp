#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "xic/errors.hpp"

namespace xic {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Rank with a threshold relative to the largest singular value.
inline int rankWithTol(const Mat& M, double relTol = 1e-10) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double cut = relTol * s(0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

// Orthonormal basis of the right nullspace of M, pinned to a convention that
// does not depend on which orthonormal basis the SVD happened to return:
//
//   1. the SVD gives some nullspace basis N,
//   2. the projector P = N N^T is basis independent,
//   3. Gram-Schmidt over the columns of P in index order (columns whose
//      residual exceeds 1e-6 are accepted),
//   4. each column is flipped so its first entry of near largest magnitude
//      is positive; magnitudes within 1e-9 relative of the maximum count as
//      tied, because symmetric configurations produce exactly equal
//      magnitudes whose computed order is roundoff noise.
//
// The result is reproducible across LAPACK and Eigen builds to roundoff.
inline Mat canonicalNullspace(const Mat& M, double relTol = 1e-10) {
  const int t = static_cast<int>(M.cols());
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double cut = (s.size() > 0) ? relTol * s(0) : 0.0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  const int dim = t - r;
  if (dim <= 0) return Mat(t, 0);

  const Mat N = svd.matrixV().rightCols(dim);
  const Mat P = N * N.transpose();

  Mat B(t, dim);
  int got = 0;
  for (int pass = 0; pass < 2 && got < dim; ++pass) {
    const double accept = (pass == 0) ? 1e-6 : 1e-12;
    for (int j = 0; j < t && got < dim; ++j) {
      Vec v = P.col(j);
      if (got > 0) {
        auto Bg = B.leftCols(got);
        v -= Bg * (Bg.transpose() * v);
        v -= Bg * (Bg.transpose() * v);  // second sweep kills roundoff drift
      }
      const double nrm = v.norm();
      if (nrm > accept) B.col(got++) = v / nrm;
    }
  }
  if (got < dim) throw Error("nullspace basis extraction ran short");

  for (int k = 0; k < dim; ++k) {
    double best = 0.0;
    for (int i = 0; i < t; ++i) best = std::max(best, std::abs(B(i, k)));
    int arg = 0;
    for (int i = 0; i < t; ++i)
      if (std::abs(B(i, k)) >= best * (1.0 - 1e-9)) {
        arg = i;
        break;
      }
    if (B(arg, k) < 0) B.col(k) = -B.col(k);
  }
  return B;
}

}  // namespace xic
