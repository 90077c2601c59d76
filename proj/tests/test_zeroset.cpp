#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "golden.hpp"
#include "xic/chambers.hpp"
#include "xic/zeroset.hpp"

using namespace xic;

namespace {

ExpSum circleSum1() {
  Vec c(5);
  c << 3.25, 1.0, -4.0, 1.0, 1.0;
  return ExpSum::make(golden::twoCirclesA(), c);
}

ExpSum circleSum2() {
  Vec c(5);
  c << 3.5, 3.0, -3.0, 1.0, 1.0;
  return ExpSum::make(golden::twoCirclesA(), c);
}

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("guarded evaluation matches the closed form") {
  const ExpSum g1 = circleSum1();
  REQUIRE(std::abs(evalExpSum(g1, v2(0.0, 0.0)) - 2.25) < 1e-14);

  // the expanded coefficients come from (e^x + 1/2)^2 + (e^y - 2)^2 - 1
  for (double x : {-1.0, 0.3, 2.0})
    for (double y : {-0.5, 0.9}) {
      const double direct = std::pow(std::exp(x) + 0.5, 2.0) +
                            std::pow(std::exp(y) - 2.0, 2.0) - 1.0;
      const double viaSum = evalExpSum(g1, v2(x, y));
      REQUIRE(std::abs(viaSum - direct) <
              1e-13 * (1.0 + std::abs(direct)));
    }

  // large arguments stay finite thanks to the max-exponent guard
  REQUIRE(std::isfinite(evalExpSumSign(g1, v2(500.0, 500.0))));
  REQUIRE(evalExpSumSign(g1, v2(500.0, 500.0)) == 1);
}

TEST_CASE("translation covariance of evaluation") {
  const ExpSum g1 = circleSum1();
  const Vec delta = v2(0.35, -0.6);
  Vec shifted(5);
  for (int j = 0; j < 5; ++j)
    shifted(j) = g1.c(j) * std::exp(g1.A.col(j).dot(delta));
  const ExpSum g1s{g1.A, shifted};
  for (double x : {-0.4, 0.7})
    for (double y : {0.1, 1.2}) {
      const double a = evalExpSum(g1, v2(x, y) + delta);
      const double b = evalExpSum(g1s, v2(x, y));
      REQUIRE(std::abs(a - b) < 1e-12 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("coefficient sign canonicalization") {
  Vec c(3);
  c << -1.0, 2.0, -3.0;
  Mat A(1, 3);
  A << 0, 1, 2;
  const ExpSum f = ExpSum::make(A, c);
  REQUIRE(f.c(0) == 1.0);
  REQUIRE(f.c(1) == -2.0);
  REQUIRE(f.c(2) == 3.0);
  REQUIRE(f.signClass().str() == "+-+");
}

TEST_CASE("moment map lands inside the polytope") {
  const Spectrum pent = Spectrum::fromMatrix(golden::pentagonA());

  // centroid at the origin of y-space
  const Vec mid = momentMap(pent, v2(0.0, 0.0));
  const Vec centroid = pent.A.rowwise().mean();
  REQUIRE((mid - centroid).cwiseAbs().maxCoeff() < 1e-14);

  // rays select the face with inner normal -w
  const Vec far = momentMap(pent, v2(0.0, 40.0));
  REQUIRE(std::abs(far(0) - 1.0) < 1e-6);
  REQUIRE(std::abs(far(1) - 4.0) < 1e-6);

  // strict interior for the marked triangle
  const Spectrum tri = Spectrum::fromMatrix(golden::twoCirclesA());
  for (double x : {-3.0, 0.0, 2.5})
    for (double y : {-2.0, 1.5}) {
      const Vec mm = momentMap(tri, v2(x, y));
      REQUIRE(mm(0) > 0.0);
      REQUIRE(mm(1) > 0.0);
      REQUIRE(mm(0) + mm(1) < 2.0);
    }
}

TEST_CASE("kernel lift reproduces the chamber point") {
  const NullBasis basis =
      nullspaceBasis(buildLifted(Spectrum::fromMatrix(golden::pentagonA())));
  const SignClass sigma = SignClass::parse("+--++");
  const Vec v = v2(0.4, -0.2);
  const Vec c = liftToCoefficients(basis, sigma, v);
  Vec logs(5);
  for (int j = 0; j < 5; ++j) logs(j) = std::log(std::abs(c(j)));
  REQUIRE((basis.B.transpose() * logs - v).cwiseAbs().maxCoeff() < 1e-10);
  std::vector<int> signs(5);
  for (int j = 0; j < 5; ++j) signs[static_cast<size_t>(j)] = c(j) > 0 ? 1 : -1;
  REQUIRE(SignClass::canonical(signs) == sigma);
}

TEST_CASE("zero set signatures of the two circle sums") {
  SignatureOptions opts;
  opts.grid = 1024;
  const TopologySignature s1 = topologySignature(circleSum1(), opts);
  REQUIRE(s1.componentCount == 1);
  REQUIRE(s1.compactComponentCount == 0);
  REQUIRE_FALSE(s1.resolutionWarning);

  const TopologySignature s2 = topologySignature(circleSum2(), opts);
  REQUIRE(s2.componentCount == 0);
  REQUIRE(s2.compactComponentCount == 0);

  // stable when asked at twice the resolution
  opts.grid = 2048;
  REQUIRE(topologySignature(circleSum1(), opts) == s1);
  REQUIRE(topologySignature(circleSum2(), opts) == s2);
}

TEST_CASE("bounded chamber carries a compact oval") {
  const Spectrum spec = Spectrum::fromMatrix(golden::pentagonA());
  const NullBasis basis = nullspaceBasis(buildLifted(spec));
  const SignClass sigma = SignClass::parse("+--++");
  const ContourGenerator gen = [&](double W) {
    Sampling smp;
    smp.clipWindow = W;
    return completedSignedContour(spec, basis, sigma, smp);
  };
  const ChamberCount cc = countChambers(gen, 8.0);
  const Chamber* inner = nullptr;
  for (const Chamber& ch : cc.chambers)
    if (ch.bounded) inner = &ch;
  REQUIRE(inner != nullptr);

  const Vec rep = v2(inner->rep.x, inner->rep.y);
  const ExpSum f =
      ExpSum::make(spec.A, liftToCoefficients(basis, sigma, rep));
  const TopologySignature sig = topologySignature(f);
  REQUIRE(sig.componentCount == 3);
  REQUIRE(sig.compactComponentCount == 1);

  // compactness class is stable across the documented margin range
  for (double dr : {1e-3, 1e-2}) {
    SignatureOptions opts;
    opts.deltaRel = dr;
    REQUIRE(topologySignature(f, opts) == sig);
  }

  // constancy with fiber moves across the whole chamber disk
  const ConstancyReport rep5 = chamberConstancyCheck(
      spec, basis, sigma, rep, 0.5 * inner->clearance, 5, 7);
  REQUIRE(rep5.signatures.size() == 5);
  REQUIRE(rep5.constant);
}

TEST_CASE("one variable root counts attain every value") {
  Mat A(1, 5);
  A << 0, 1, 2, 3, 4;
  const double eps = 1e-4;
  const double families[5][5] = {{1, 1, 1, 1, 1},
                                 {-1, 1, eps, eps, eps},
                                 {2, -3, 1, eps, eps},
                                 {-6, 11, -6, 1, eps},
                                 {24, -50, 35, -10, 1}};
  for (int k = 0; k < 5; ++k) {
    Vec c(5);
    for (int j = 0; j < 5; ++j) c(j) = families[k][j];
    const RootCount rc = univariateRootCount(ExpSum::make(A, c));
    INFO("target count " << k);
    REQUIRE(rc.count == k);
    REQUIRE(rc.descartesBound == k);
    REQUIRE(rc.count <= rc.descartesBound);
    REQUIRE_FALSE(rc.resolutionWarning);
  }
}

TEST_CASE("root counting basics") {
  Mat A2(1, 2);
  A2 << 0, 1;
  Vec c2(2);
  c2 << 1.0, -1.0;
  const RootCount one = univariateRootCount(ExpSum::make(A2, c2));
  REQUIRE(one.count == 1);
  REQUIRE(one.descartesBound == 1);

  Mat A1(1, 1);
  A1 << 0;
  Vec c1(1);
  c1 << 1.0;
  REQUIRE(univariateRootCount(ExpSum::make(A1, c1)).count == 0);

  // the irrational gap circuit: away from the locus, zero or two roots
  const Mat As = golden::sqrt2A();
  Vec cs(3);
  cs << 1.0, -1.0, 1.0;
  REQUIRE(univariateRootCount(ExpSum::make(As, cs)).count == 0);
  cs << 1.0, -3.0, 1.0;
  const RootCount two = univariateRootCount(ExpSum::make(As, cs));
  REQUIRE(two.count == 2);
  REQUIRE(two.descartesBound == 2);

  REQUIRE_THROWS_AS(univariateRootCount(circleSum1()), Error);
}

TEST_CASE("one variable signatures count points as compact") {
  Mat A(1, 2);
  A << 0, 1;
  Vec c(2);
  c << 1.0, -1.0;
  const TopologySignature sig = topologySignature(ExpSum::make(A, c));
  REQUIRE(sig.componentCount == 1);
  REQUIRE(sig.compactComponentCount == 1);
}
