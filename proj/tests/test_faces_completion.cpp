#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "golden.hpp"
#include "xic/completion.hpp"
#include "xic/faces.hpp"

using namespace xic;

namespace {

Spectrum specOf(const Mat& A) { return Spectrum::fromMatrix(A); }

NullBasis basisOf(const Mat& A) {
  return nullspaceBasis(buildLifted(Spectrum::fromMatrix(A)));
}

std::vector<Face> facesOfDim(const std::vector<Face>& faces, int dim) {
  std::vector<Face> out;
  for (const Face& f : faces)
    if (f.dim == dim) out.push_back(f);
  return out;
}

const Face* findFace(const std::vector<Face>& faces,
                     const std::vector<int>& members) {
  for (const Face& f : faces)
    if (f.members == members) return &f;
  return nullptr;
}

}  // namespace

TEST_CASE("pentagon face lattice is simplicial") {
  const auto faces = faceLattice(specOf(golden::pentagonA()));
  REQUIRE(facesOfDim(faces, 1).size() == 5);
  REQUIRE(facesOfDim(faces, 0).size() == 5);
  for (const Face& f : facesOfDim(faces, 1)) REQUIRE(f.members.size() == 2);
  REQUIRE(isCombinatoriallySimplicial(specOf(golden::pentagonA())));
  REQUIRE(nonSimplicialFaces(specOf(golden::pentagonA())).empty());
}

TEST_CASE("segment spectra expose their two endpoints") {
  const auto faces = faceLattice(specOf(golden::sqrt2A()));
  REQUIRE(faces.size() == 2);
  std::set<int> ends;
  for (const Face& f : faces) {
    REQUIRE(f.dim == 0);
    REQUIRE(f.members.size() == 1);
    ends.insert(f.members[0]);
  }
  REQUIRE(ends == std::set<int>{0, 2});
  REQUIRE(isCombinatoriallySimplicial(specOf(golden::sqrt2A())));
}

TEST_CASE("triangle with marked edge midpoints") {
  const Spectrum spec = specOf(golden::twoCirclesA());
  const auto faces = faceLattice(spec);
  REQUIRE(facesOfDim(faces, 1).size() == 3);
  REQUIRE(facesOfDim(faces, 0).size() == 3);

  const Face* bottom = findFace(faces, {0, 1, 3});
  const Face* left = findFace(faces, {0, 2, 4});
  const Face* hyp = findFace(faces, {3, 4});
  REQUIRE(bottom != nullptr);
  REQUIRE(left != nullptr);
  REQUIRE(hyp != nullptr);
  REQUIRE(std::abs(bottom->innerNormal(0) - 0.0) < 1e-9);
  REQUIRE(std::abs(bottom->innerNormal(1) - 1.0) < 1e-9);
  REQUIRE(std::abs(left->innerNormal(0) - 1.0) < 1e-9);
  REQUIRE(std::abs(left->innerNormal(1) - 0.0) < 1e-9);

  REQUIRE_FALSE(isCombinatoriallySimplicial(spec));
  const auto nsf = nonSimplicialFaces(spec);
  REQUIRE(nsf.size() == 2);
  // the defect caps the number of non-simplicial faces here
  REQUIRE(static_cast<int>(nsf.size()) <=
          spec.t() - affineDimension(buildLifted(spec)) - 1);
}

TEST_CASE("prism face lattice in three variables") {
  const Spectrum spec = specOf(golden::prismA());
  const auto faces = faceLattice(spec);
  REQUIRE(facesOfDim(faces, 2).size() == 5);
  REQUIRE(facesOfDim(faces, 1).size() == 9);
  REQUIRE(facesOfDim(faces, 0).size() == 6);
  REQUIRE_FALSE(isCombinatoriallySimplicial(spec));

  // three quadrilateral facets, each carrying a one dimensional circuit
  const auto nsf = nonSimplicialFaces(spec);
  REQUIRE(nsf.size() == 3);
  for (const NonSimplicialFace& nf : nsf) {
    REQUIRE(nf.face.members.size() == 4);
    REQUIRE(nf.face.dim == 2);
    REQUIRE(std::abs(nf.bw.norm() - 1.0) < 1e-12);
    REQUIRE((buildLifted(spec) * nf.ew).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("face lattice dimension limit") {
  Mat A(4, 6);
  A << 0, 1, 0, 0, 0, 1,
       0, 0, 1, 0, 0, 1,
       0, 0, 0, 1, 0, 1,
       0, 0, 0, 0, 1, 1;
  REQUIRE_THROWS_AS(faceLattice(specOf(A)), UnsupportedDimension);
}

TEST_CASE("facet line of the marked triangle, frozen values") {
  const Spectrum spec = specOf(golden::twoCirclesA());
  const NullBasis basis = basisOf(golden::twoCirclesA());
  const auto nsf = nonSimplicialFaces(spec);
  const NonSimplicialFace* leftFace = nullptr;
  for (const NonSimplicialFace& nf : nsf)
    if (nf.face.members == std::vector<int>{0, 2, 4}) leftFace = &nf;
  REQUIRE(leftFace != nullptr);

  // circuit relation proportional to (1, -2, 1), canonical sign pins the
  // middle entry positive
  REQUIRE(leftFace->bw(1) > 0.0);
  REQUIRE(std::abs(leftFace->bw(0) / leftFace->bw(1) + 0.5) < 1e-12);
  REQUIRE(std::abs(leftFace->bw(2) / leftFace->bw(1) + 0.5) < 1e-12);

  const FacetLine line =
      facetLine(*leftFace, basis, SignClass::parse("++-++"));
  REQUIRE(line.admissible);

  // frozen in the normalization where the circuit relation is (1, -2, 1)
  const double s0 = leftFace->bw(0);
  REQUIRE(std::abs(line.mu(0) / s0 - golden::kTwoCirclesMu0) < 1e-9);
  REQUIRE(std::abs(line.mu(1) / s0 - golden::kTwoCirclesMu1) < 1e-9);
  REQUIRE(std::abs(line.offset / s0 - golden::kTwoCirclesLineOffset) < 1e-10);

  // the line direction is the image of the face tangent: vectors in the
  // kernel orthogonal to the lifted relation map onto the line direction
  Vec alpha(2);
  alpha << -line.mu(1), line.mu(0);
  const Vec u = basis.B * alpha;
  REQUIRE(std::abs(u.dot(leftFace->ew)) < 1e-12);
}

TEST_CASE("admissibility follows the sign class restriction") {
  const Spectrum spec = specOf(golden::twoCirclesA());
  const NullBasis basis = basisOf(golden::twoCirclesA());

  const CompletedContour ccEmpty = completedSignedContour(
      spec, basis, SignClass::parse("++-++"));
  REQUIRE(ccEmpty.arcs.empty());  // this class is not attained by arcs
  REQUIRE(ccEmpty.lines.size() == 2);
  int admissible = 0;
  for (const FacetLine& ln : ccEmpty.lines)
    if (ln.admissible) ++admissible;
  REQUIRE(admissible == 1);  // only the (+,-,+) restriction matches

  const CompletedContour ccBoth = completedSignedContour(
      spec, basis, SignClass::parse("+--++"));
  REQUIRE_FALSE(ccBoth.arcs.empty());
  REQUIRE(ccBoth.lines.size() == 2);
  for (const FacetLine& ln : ccBoth.lines) REQUIRE(ln.admissible);

  const CompletedContour ccNone = completedSignedContour(
      spec, basis, SignClass::parse("+++++"));
  for (const FacetLine& ln : ccNone.lines) REQUIRE_FALSE(ln.admissible);

  // pentagon contours complete to themselves
  const CompletedContour pent = completedSignedContour(
      specOf(golden::pentagonA()), basisOf(golden::pentagonA()),
      SignClass::parse("+--++"));
  REQUIRE(pent.lines.empty());
}

TEST_CASE("facet lines reject degenerate circuits") {
  const NullBasis basis = basisOf(golden::twoCirclesA());

  NonSimplicialFace zeroEntry;
  zeroEntry.face.members = {0, 1, 2};
  zeroEntry.bw = Vec(3);
  zeroEntry.bw << 1.0, 0.0, -1.0;
  zeroEntry.ew = Vec::Zero(5);
  REQUIRE_THROWS_AS(facetLine(zeroEntry, basis, SignClass::parse("+++++")),
                    PyramidalCircuit);

  NonSimplicialFace badLift;
  badLift.face.members = {0, 1, 2};
  badLift.bw = Vec(3);
  badLift.bw << 1.0, -2.0, 1.0;
  badLift.bw /= badLift.bw.norm();
  badLift.ew = Vec::Zero(5);
  for (int j = 0; j < 3; ++j) badLift.ew(badLift.face.members[j]) = badLift.bw(j);
  REQUIRE_THROWS_AS(facetLine(badLift, basis, SignClass::parse("+++++")),
                    InconsistentLift);
}

TEST_CASE("initial terms select the face with inner normal w") {
  const Spectrum pent = specOf(golden::pentagonA());
  Vec c(5);
  c << 1, 2, 3, 4, 5;

  Vec w(2);
  w << 0.0, 1.0;
  InitialTerm it = initialTerm(c, pent, w);
  REQUIRE(it.members == std::vector<int>{0, 1});
  REQUIRE(it.coefficients(0) == 1.0);
  REQUIRE(it.coefficients(1) == 2.0);

  w << 1.0, 0.0;
  it = initialTerm(c, pent, w);
  REQUIRE(it.members == std::vector<int>{0, 2});

  w << 1.0, 1.0;
  it = initialTerm(c, pent, w);
  REQUIRE(it.members == std::vector<int>{0});

  const Spectrum inf = specOf(golden::twoCirclesA());
  w << 0.0, 1.0;
  it = initialTerm(c, inf, w);
  REQUIRE(it.members == std::vector<int>{0, 1, 3});

  Vec zero = Vec::Zero(2);
  REQUIRE_THROWS_AS(initialTerm(c, pent, zero), Error);
}
