#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "golden.hpp"
#include "xic/parametrization.hpp"
#include "xic/polyroot.hpp"

using namespace xic;

namespace {

NullBasis pentagonBasis() {
  return nullspaceBasis(buildLifted(Spectrum::fromMatrix(golden::pentagonA())));
}

}  // namespace

TEST_CASE("projective parameters are stored at unit norm") {
  Vec l(2);
  l << 3.0, -4.0;
  const ProjParam p(l);
  REQUIRE(std::abs(p.lambda.norm() - 1.0) < 1e-15);
  REQUIRE(std::abs(p.lambda(0) - 0.6) < 1e-15);
  REQUIRE(std::abs(p.lambda(1) + 0.8) < 1e-15);

  Vec z = Vec::Zero(2);
  REQUIRE_THROWS_AS(ProjParam(z), Error);

  const ProjParam q = ProjParam::angle(0.25);
  REQUIRE(std::abs(q.lambda(0) - std::cos(0.25)) < 1e-15);
  REQUIRE(std::abs(q.lambda(1) - std::sin(0.25)) < 1e-15);
}

TEST_CASE("hyperplane proximity is guarded, not crossed") {
  const NullBasis basis = pentagonBasis();

  // The first kernel row is orthogonal to the vertical direction.
  bool hit = false;
  try {
    guardedDots(ProjParam::angle(M_PI / 2.0), basis);
  } catch (const HyperplaneHit& e) {
    hit = true;
    REQUIRE(e.index == 0);
  }
  REQUIRE(hit);

  // Mid-interval directions pass and give one dot per spectrum point.
  const Vec dots = guardedDots(ProjParam::angle(0.3), basis);
  REQUIRE(dots.size() == 5);
  for (int i = 0; i < dots.size(); ++i) REQUIRE(std::abs(dots(i)) > 1e-6);
}

TEST_CASE("reduced contour point at a reference direction") {
  const NullBasis basis = pentagonBasis();
  const Vec v = xiPoint(ProjParam::angle(0.3), basis);
  REQUIRE(v.size() == 2);
  REQUIRE(std::abs(v(0) - golden::kPentagonXiAt03X) < 1e-10);
  REQUIRE(std::abs(v(1) - golden::kPentagonXiAt03Y) < 1e-10);

  // Scale and global sign of lambda do not move the image point.
  Vec l(2);
  l << 7.25 * std::cos(0.3), 7.25 * std::sin(0.3);
  const Vec same = xiPoint(ProjParam(l), basis);
  REQUIRE((same - v).cwiseAbs().maxCoeff() < 1e-12);
  const Vec flip = xiPoint(ProjParam::angle(0.3 + M_PI), basis);
  REQUIRE((flip - v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("orthant signs are canonical and flip invariant") {
  const NullBasis basis = pentagonBasis();
  const SignClass s = orthantSign(ProjParam::angle(0.3), basis);
  REQUIRE(s.str() == "+--++");
  REQUIRE(orthantSign(ProjParam::angle(0.3 + M_PI), basis) == s);
  REQUIRE(s.str()[0] == '+');
}

TEST_CASE("parametrized coefficients give a degenerate zero") {
  const Spectrum spec = Spectrum::fromMatrix(golden::pentagonA());
  const NullBasis basis = nullspaceBasis(buildLifted(spec));

  // At y = 0 the image lies in the kernel of the lifted matrix.
  const Vec y0 = Vec::Zero(2);
  const Vec p0 = psi(ProjParam::angle(0.3), y0, basis, spec);
  REQUIRE(std::abs(p0.norm() - 1.0) < 1e-14);
  REQUIRE((buildLifted(spec) * p0).cwiseAbs().maxCoeff() < 1e-14);

  // For any (lambda, y) the exponential sum with coefficients psi vanishes
  // together with its gradient at y: that is what membership in the
  // discriminant closure means.
  const double thetas[3] = {0.3, 1.1, 2.9};
  const double ys[3][2] = {{0.0, 0.0}, {0.4, -0.7}, {-1.2, 0.5}};
  for (int k = 0; k < 3; ++k) {
    Vec y(2);
    y << ys[k][0], ys[k][1];
    const Vec c = psi(ProjParam::angle(thetas[k]), y, basis, spec);
    double f = 0.0;
    Vec grad = Vec::Zero(2);
    for (int j = 0; j < spec.t(); ++j) {
      const double w = c(j) * std::exp(spec.A.col(j).dot(y));
      f += w;
      grad += w * spec.A.col(j);
    }
    REQUIRE(std::abs(f) < 1e-12);
    REQUIRE(grad.cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("circuit membership via the product condition") {
  const Spectrum spec = Spectrum::fromMatrix(golden::sqrt2A());
  const NullBasis basis = nullspaceBasis(buildLifted(spec));
  REQUIRE(basis.m() == 1);

  Vec on(3);
  on << 1.0, golden::kSqrt2OnLocusC1, 1.0;
  const CircuitTestResult hit = circuitMembershipTest(on, basis);
  REQUIRE(hit.signCompatible);
  REQUIRE(std::abs(hit.residual) < 1e-12);
  REQUIRE(hit.onDiscriminant);

  Vec off(3);
  off << 1.0, -1.0, 1.0;
  const CircuitTestResult miss = circuitMembershipTest(off, basis);
  REQUIRE(miss.signCompatible);
  REQUIRE(std::abs(miss.residual) > 0.1);
  REQUIRE_FALSE(miss.onDiscriminant);

  // All-positive coefficients cannot match the alternating relation signs.
  Vec pos(3);
  pos << 1.0, 1.0, 1.0;
  REQUIRE_FALSE(circuitMembershipTest(pos, basis).signCompatible);
}

TEST_CASE("degenerate circuit inputs are rejected") {
  const NullBasis pent = pentagonBasis();
  Vec c5 = Vec::Ones(5);
  REQUIRE_THROWS_AS(circuitMembershipTest(c5, pent), NotACircuit);

  Vec b(3), c(3);
  b << 1.0, 0.0, -1.0;
  c << 1.0, 1.0, 1.0;
  REQUIRE_THROWS_AS(circuitMembershipTest(c, b), PyramidalCircuit);

  Vec b2(3), c2(3);
  b2 << 1.0, -2.0, 1.0;
  c2 << 1.0, 0.0, 1.0;
  REQUIRE_THROWS_AS(circuitMembershipTest(c2, b2), Error);
}

TEST_CASE("emptiness classification by codimension") {
  const Spectrum simplex = Spectrum::fromMatrix(golden::simplexA());
  REQUIRE(emptinessCase(simplex, nullspaceBasis(buildLifted(simplex))) ==
          EmptinessCase::TrivialEmpty);

  const Spectrum circuit = Spectrum::fromMatrix(golden::sqrt2A());
  REQUIRE(emptinessCase(circuit, nullspaceBasis(buildLifted(circuit))) ==
          EmptinessCase::Circuit);

  const Spectrum pent = Spectrum::fromMatrix(golden::pentagonA());
  REQUIRE(emptinessCase(pent, nullspaceBasis(buildLifted(pent))) ==
          EmptinessCase::General);
}

TEST_CASE("real root isolation on small polynomials") {
  // (x + 3)(x - 1)(x - 2) = 6 - 7x + 0x^2 + x^3
  const poly::Poly p{6.0, -7.0, 0.0, 1.0};
  const auto roots = poly::realRoots(p);
  REQUIRE(roots.size() == 3);
  REQUIRE(std::abs(roots[0] + 3.0) < 1e-10);
  REQUIRE(std::abs(roots[1] - 1.0) < 1e-10);
  REQUIRE(std::abs(roots[2] - 2.0) < 1e-10);

  // Double root: the touch point is still reported once.
  const poly::Poly dbl{1.0, -2.0, 1.0};
  const auto touch = poly::realRoots(dbl);
  REQUIRE(touch.size() == 1);
  REQUIRE(std::abs(touch[0] - 1.0) < 1e-7);

  const poly::Poly none{1.0, 0.0, 1.0};
  REQUIRE(poly::realRoots(none).empty());
}
