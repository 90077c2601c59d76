#pragma once

#include <utility>

#include "xic/errors.hpp"
#include "xic/linalg.hpp"

namespace xic {

// Exponent matrix of an exponential sum g(y) = sum_j c_j e^{a_j . y}.
// Columns are the exponent points a_j and must be pairwise distinct.
struct Spectrum {
  Mat A;

  int n() const { return static_cast<int>(A.rows()); }
  int t() const { return static_cast<int>(A.cols()); }
  Vec point(int j) const { return A.col(j); }

  static Spectrum fromMatrix(Mat m) {
    if (m.rows() < 1 || m.cols() < 1) throw Error("spectrum must be at least 1x1");
    for (int i = 0; i < m.cols(); ++i)
      for (int j = i + 1; j < m.cols(); ++j)
        if (m.col(i) == m.col(j))
          throw Error("spectrum columns must be pairwise distinct");
    return Spectrum{std::move(m)};
  }
};

// A with an all-ones row prepended. Its right nullspace carries every affine
// relation among the exponent points.
inline Mat buildLifted(const Spectrum& spec) {
  Mat L(spec.n() + 1, spec.t());
  L.row(0).setOnes();
  L.bottomRows(spec.n()) = spec.A;
  return L;
}

// t x m orthonormal nullspace basis of the lifted matrix; rows beta_i are the
// coordinates of the reduced space. m = t - d(A) - 1 and may be zero.
struct NullBasis {
  Mat B;

  int t() const { return static_cast<int>(B.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  Vec beta(int i) const { return B.row(i).transpose(); }
};

inline NullBasis nullspaceBasis(const Mat& lifted, double tol = 1e-10) {
  return NullBasis{canonicalNullspace(lifted, tol)};
}

inline int affineDimension(const Mat& lifted, double tol = 1e-10) {
  return rankWithTol(lifted, tol) - 1;
}

// A spectrum is pyramidal exactly when some row of B vanishes; such a point
// sits affinely outside the others and forces a degenerate discriminant.
inline bool isPyramidal(const NullBasis& basis, double tol = 1e-10) {
  if (basis.m() == 0) return false;  // an empty basis has no rows to vanish
  for (int i = 0; i < basis.t(); ++i)
    if (basis.B.row(i).norm() <= tol) return true;
  return false;
}

struct SpectrumReport {
  int d = 0;
  bool pyramidal = false;
  bool combinatoriallySimplicial = false;
  int circuitDefect = 0;  // t - d(A) - 1: 0 simplex, 1 circuit
};

}  // namespace xic
