#pragma once

#include <cmath>
#include <utility>

#include "xic/signclass.hpp"
#include "xic/spectrum.hpp"

namespace xic {

inline constexpr double kHyperplaneGuard = 1e-8;

// A point of projective parameter space, stored at unit norm. lambda and
// -lambda are the same point.
struct ProjParam {
  Vec lambda;

  explicit ProjParam(Vec l) : lambda(std::move(l)) {
    const double n = lambda.norm();
    if (!(n > 0.0)) throw Error("projective parameter must be nonzero");
    lambda /= n;
  }

  // Convenience for the two parameter case: the direction (cos th, sin th).
  static ProjParam angle(double th) {
    Vec l(2);
    l << std::cos(th), std::sin(th);
    return ProjParam(std::move(l));
  }
};

// lambda . beta_i for all rows, guarded against hyperplane proximity:
// |lambda . beta_i| < guard * ||beta_i|| raises HyperplaneHit(i).
inline Vec guardedDots(const ProjParam& p, const NullBasis& basis,
                       double guard = kHyperplaneGuard) {
  if (basis.m() == 0) throw DegenerateNullspace("empty nullspace basis");
  if (p.lambda.size() != basis.m()) throw Error("parameter dimension mismatch");
  Vec dots = basis.B * p.lambda;
  for (int i = 0; i < dots.size(); ++i) {
    const double scale = basis.B.row(i).norm();
    if (std::abs(dots(i)) < guard * scale) throw HyperplaneHit(i);
  }
  return dots;
}

// The parametrization ([lambda], y) -> [(lambda B^T) . e^{-yA}] of the
// discriminant, returned at unit norm; signs are defined up to global flip.
inline Vec psi(const ProjParam& p, const Vec& y, const NullBasis& basis,
               const Spectrum& spec, double guard = kHyperplaneGuard) {
  if (y.size() != spec.n()) throw Error("shift dimension mismatch");
  Vec dots = guardedDots(p, basis, guard);
  Vec expo = (-(spec.A.transpose() * y)).array().exp();
  Vec out = dots.cwiseProduct(expo);
  return out / out.norm();
}

// Reduced image (Log|lambda B^T|) B. Invariant under rescaling of lambda
// because the all-ones row of the lifted matrix makes column sums of B zero.
inline Vec xiPoint(const ProjParam& p, const NullBasis& basis,
                   double guard = kHyperplaneGuard) {
  Vec dots = guardedDots(p, basis, guard);
  Vec logs = dots.array().abs().log();
  return basis.B.transpose() * logs;
}

inline SignClass orthantSign(const ProjParam& p, const NullBasis& basis,
                             double guard = kHyperplaneGuard) {
  Vec dots = guardedDots(p, basis, guard);
  std::vector<int> s(static_cast<size_t>(dots.size()));
  for (int i = 0; i < dots.size(); ++i)
    s[static_cast<size_t>(i)] = (dots(i) > 0) ? 1 : -1;
  return SignClass::canonical(std::move(s));
}

struct CircuitTestResult {
  bool onDiscriminant = false;
  double residual = 0.0;
  bool signCompatible = false;
};

// Closed form membership test for circuits (nullspace dimension 1):
// c lies on the discriminant iff sum_j b_j (log|c_j| - log|b_j|) = 0 and
// sign(c) = +-sign(b). Logs rather than products keep irrational exponent
// examples inside double range.
inline CircuitTestResult circuitMembershipTest(const Vec& c, const Vec& b,
                                               double tol = 1e-12) {
  if (c.size() != b.size()) throw Error("coefficient and relation size mismatch");
  const double bmax = b.cwiseAbs().maxCoeff();
  if (!(bmax > 0.0)) throw PyramidalCircuit("zero circuit relation");
  double residual = 0.0;
  bool allSame = true, allOpp = true;
  for (int j = 0; j < b.size(); ++j) {
    if (std::abs(b(j)) <= 1e-14 * bmax)
      throw PyramidalCircuit("circuit relation has a zero entry");
    if (c(j) == 0.0) throw Error("coefficient vector has a zero entry");
    residual += b(j) * (std::log(std::abs(c(j))) - std::log(std::abs(b(j))));
    const bool same = (c(j) > 0) == (b(j) > 0);
    allSame = allSame && same;
    allOpp = allOpp && !same;
  }
  const bool signCompatible = allSame || allOpp;
  return {std::abs(residual) <= tol && signCompatible, residual, signCompatible};
}

inline CircuitTestResult circuitMembershipTest(const Vec& c, const NullBasis& basis,
                                               double tol = 1e-12) {
  if (basis.m() != 1) throw NotACircuit("nullspace dimension is not 1");
  return circuitMembershipTest(c, Vec(basis.B.col(0)), tol);
}

enum class EmptinessCase { TrivialEmpty, Circuit, General };

// Classification by codimension t - d(A): a simplex has an empty
// discriminant, a circuit has the closed form above, anything else goes
// through the parametrization.
inline EmptinessCase emptinessCase(const Spectrum&, const NullBasis& basis) {
  const int codim = basis.m() + 1;
  if (codim <= 1) return EmptinessCase::TrivialEmpty;
  if (codim == 2) return EmptinessCase::Circuit;
  return EmptinessCase::General;
}

}  // namespace xic
