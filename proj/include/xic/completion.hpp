#pragma once

#include <vector>

#include "xic/contour.hpp"
#include "xic/faces.hpp"

namespace xic {

// Non-simplicial proper face together with its circuit data: bw is the
// one dimensional kernel of the lifted sub-spectrum on the face members,
// ew its zero extension to all t columns.
struct NonSimplicialFace {
  Face face;
  Vec bw;
  Vec ew;
};

inline std::vector<NonSimplicialFace> nonSimplicialFaces(const Spectrum& spec,
                                                         double tol = 1e-9) {
  std::vector<NonSimplicialFace> out;
  const Mat lifted = buildLifted(spec);
  for (const Face& f : faceLattice(spec, tol)) {
    if (static_cast<int>(f.members.size()) <= f.dim + 1) continue;
    Mat sub(lifted.rows(), static_cast<int>(f.members.size()));
    for (size_t j = 0; j < f.members.size(); ++j)
      sub.col(static_cast<int>(j)) = lifted.col(f.members[j]);
    const Mat K = canonicalNullspace(sub);
    if (K.cols() != 1)
      throw Error("face defect above one is not supported");
    NonSimplicialFace nf;
    nf.face = f;
    nf.bw = K.col(0);
    nf.ew = Vec::Zero(spec.t());
    for (size_t j = 0; j < f.members.size(); ++j)
      nf.ew(f.members[j]) = nf.bw(static_cast<int>(j));
    out.push_back(std::move(nf));
  }
  return out;
}

// Straight line { v : mu . v = offset } appended to a signed contour by a
// non-simplicial face. Admissibility records whether the restriction of the
// requested sign class to the face members matches the circuit signs.
struct FacetLine {
  Vec mu;
  double offset = 0.0;
  bool admissible = false;
  int faceIndex = 0;
};

inline FacetLine facetLine(const NonSimplicialFace& nf, const NullBasis& basis,
                           const SignClass& sigma, int faceIndex = 0) {
  const Vec& b = nf.bw;
  const double bmax = b.cwiseAbs().maxCoeff();
  for (int j = 0; j < b.size(); ++j)
    if (std::abs(b(j)) <= 1e-13 * bmax)
      throw PyramidalCircuit("face circuit with a vanishing entry");

  FacetLine line;
  line.faceIndex = faceIndex;
  line.mu = basis.B.transpose() * nf.ew;
  // ew must lie in the span of the basis columns, otherwise the line is not
  // expressible in contour coordinates at all
  if ((basis.B * line.mu - nf.ew).norm() > 1e-8 * nf.ew.norm())
    throw InconsistentLift("face circuit does not lift to the kernel");
  double off = 0.0;
  for (int j = 0; j < b.size(); ++j) off += b(j) * std::log(std::abs(b(j)));
  line.offset = off;

  bool same = true, opp = true;
  for (size_t j = 0; j < nf.face.members.size(); ++j) {
    const int sb = b(static_cast<int>(j)) > 0 ? 1 : -1;
    const int ss = sigma.s[static_cast<size_t>(nf.face.members[j])];
    same = same && (sb == ss);
    opp = opp && (sb == -ss);
  }
  line.admissible = same || opp;
  return line;
}

// Signed contour arcs plus every candidate facet line, each flagged for
// admissibility under sigma. Chamber counting uses the admissible ones.
struct CompletedContour {
  SignClass sigma;
  std::vector<ContourArc> arcs;
  std::vector<FacetLine> lines;
};

inline CompletedContour completedSignedContour(const Spectrum& spec,
                                               const NullBasis& basis,
                                               const SignClass& sigma,
                                               const Sampling& smp = {}) {
  CompletedContour cc;
  cc.sigma = sigma;
  cc.arcs = traceSignedContour(basis, sigma, smp);
  const auto faces = nonSimplicialFaces(spec);
  for (size_t i = 0; i < faces.size(); ++i)
    cc.lines.push_back(facetLine(faces[i], basis, sigma, static_cast<int>(i)));
  return cc;
}

// ── initial terms ───────────────────────────────────────────────────────────

// Restriction of an exponential sum to the face with inner normal w: the
// columns minimizing <w, a_j>, with their coefficients.
struct InitialTerm {
  std::vector<int> members;
  Vec coefficients;
};

inline InitialTerm initialTerm(const Vec& c, const Spectrum& spec, const Vec& w,
                               double relTol = 1e-9) {
  if (w.size() != spec.n()) throw Error("direction dimension mismatch");
  if (w.norm() == 0.0) throw Error("initial term needs a nonzero direction");
  const Vec vals = spec.A.transpose() * w;
  const double h = vals.minCoeff();
  const double eps = relTol * (spec.A.cwiseAbs().maxCoeff() + 1.0) * w.norm();
  InitialTerm out;
  for (int j = 0; j < spec.t(); ++j)
    if (vals(j) <= h + eps) out.members.push_back(j);
  out.coefficients.resize(static_cast<int>(out.members.size()));
  for (size_t j = 0; j < out.members.size(); ++j)
    out.coefficients(static_cast<int>(j)) = c(out.members[j]);
  return out;
}

}  // namespace xic
