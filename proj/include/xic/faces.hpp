#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "xic/planar.hpp"
#include "xic/spectrum.hpp"

namespace xic {

// Proper face of the exponent polytope: the set of spectrum points lying on
// it, its dimension, and a supporting normal pointing into the polytope.
struct Face {
  Vec innerNormal;          // ambient coordinates
  std::vector<int> members;  // column indices, ascending
  int dim = 0;
};

namespace detail {

inline int closestColumn(const Mat& P, double x, double y) {
  int best = 0;
  double bd = std::numeric_limits<double>::max();
  for (int j = 0; j < P.cols(); ++j) {
    const double d = std::hypot(P(0, j) - x, P(1, j) - y);
    if (d < bd) {
      bd = d;
      best = j;
    }
  }
  return best;
}

// Faces of a planar point set given in 2d span coordinates. Normals are
// returned in the same 2d coordinates.
inline std::vector<Face> planarFaces(const Mat& P, double eps) {
  const int t = static_cast<int>(P.cols());
  std::vector<planar::Pt> pts(static_cast<size_t>(t));
  for (int j = 0; j < t; ++j) pts[static_cast<size_t>(j)] = {P(0, j), P(1, j)};
  const auto hull = planar::hull2d(pts);
  const size_t H = hull.size();

  std::vector<Face> faces;
  std::vector<Vec> cornerNormal(static_cast<size_t>(t), Vec::Zero(2));
  std::vector<int> corners;
  for (size_t i = 0; i < H; ++i) {
    const planar::Pt &a = hull[i], &b = hull[(i + 1) % H];
    Vec nrm(2);
    nrm << -(b.y - a.y), (b.x - a.x);  // ccw hull: left side is the interior
    nrm.normalize();
    Face edge;
    edge.dim = 1;
    edge.innerNormal = nrm;
    for (int j = 0; j < t; ++j)
      if (std::abs(nrm(0) * (P(0, j) - a.x) + nrm(1) * (P(1, j) - a.y)) <= eps)
        edge.members.push_back(j);
    faces.push_back(std::move(edge));
    const int ca = closestColumn(P, a.x, a.y);
    if (std::find(corners.begin(), corners.end(), ca) == corners.end())
      corners.push_back(ca);
    cornerNormal[static_cast<size_t>(ca)] += nrm;
    cornerNormal[static_cast<size_t>(closestColumn(P, b.x, b.y))] += nrm;
  }
  for (int c : corners) {
    Face v;
    v.dim = 0;
    v.members = {c};
    v.innerNormal = cornerNormal[static_cast<size_t>(c)].normalized();
    faces.push_back(std::move(v));
  }
  return faces;
}

}  // namespace detail

// Enumerates the proper faces of conv(A) for ambient dimension up to 3.
// Degenerate spectra are reduced to an orthonormal frame of their affine
// span first, so a flat point set in R^3 is treated as the polygon it is.
inline std::vector<Face> faceLattice(const Spectrum& spec, double tol = 1e-9) {
  const int n = spec.n(), t = spec.t();
  if (n > 3) throw UnsupportedDimension("face lattice implemented for n <= 3");
  const int D = affineDimension(buildLifted(spec));
  std::vector<Face> faces;
  if (D <= 0) return faces;
  const double scale = spec.A.cwiseAbs().maxCoeff() + 1.0;
  const double eps = tol * scale;

  Vec mean = spec.A.rowwise().mean();
  Mat centered = spec.A.colwise() - mean;
  Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeFullU);
  Mat frame = svd.matrixU().leftCols(D);  // n x D
  Mat P = frame.transpose() * centered;   // D x t, span coordinates

  if (D == 1) {
    int lo = 0, hi = 0;
    for (int j = 1; j < t; ++j) {
      if (P(0, j) < P(0, lo)) lo = j;
      if (P(0, j) > P(0, hi)) hi = j;
    }
    Face fa, fb;
    fa.dim = fb.dim = 0;
    fa.members = {lo};
    fa.innerNormal = frame.col(0);
    fb.members = {hi};
    fb.innerNormal = -frame.col(0);
    faces.push_back(std::move(fa));
    faces.push_back(std::move(fb));
  } else if (D == 2) {
    for (Face& f : detail::planarFaces(P, eps)) {
      f.innerNormal = (frame * f.innerNormal).normalized();
      faces.push_back(std::move(f));
    }
  } else {
    // D == 3: supporting planes through point triples give the facets
    std::map<std::vector<int>, Vec> facets;
    for (int i = 0; i < t; ++i)
      for (int j = i + 1; j < t; ++j)
        for (int k = j + 1; k < t; ++k) {
          const Eigen::Vector3d vj = P.col(j) - P.col(i);
          const Eigen::Vector3d vk = P.col(k) - P.col(i);
          Eigen::Vector3d u = vj.cross(vk);
          const double un = u.norm();
          if (un <= eps * scale) continue;
          u /= un;
          double mn = 0.0, mx = 0.0;
          for (int l = 0; l < t; ++l) {
            const double s = u.dot(P.col(l) - P.col(i));
            mn = std::min(mn, s);
            mx = std::max(mx, s);
          }
          Vec inner;
          if (mn >= -eps)
            inner = u;
          else if (mx <= eps)
            inner = Vec(-u);
          else
            continue;
          std::vector<int> mem;
          for (int l = 0; l < t; ++l)
            if (std::abs(u.dot(P.col(l) - P.col(i))) <= eps) mem.push_back(l);
          facets.emplace(std::move(mem), inner);
        }

    std::map<std::vector<int>, Vec> edges;
    std::map<int, Vec> verts;
    for (const auto& [mem, nrm] : facets) {
      Face f;
      f.dim = 2;
      f.members = mem;
      f.innerNormal = (frame * nrm).normalized();
      faces.push_back(f);

      // facet polygon in its own plane: corners are polytope vertices and
      // polygon edges are polytope edges
      Eigen::Vector3d n3(nrm(0), nrm(1), nrm(2));
      Eigen::Vector3d e1 = n3.unitOrthogonal(), e2 = n3.cross(e1);
      Mat Q(2, static_cast<int>(mem.size()));
      for (size_t q = 0; q < mem.size(); ++q) {
        const Eigen::Vector3d p = P.col(mem[q]);
        Q(0, static_cast<int>(q)) = e1.dot(p);
        Q(1, static_cast<int>(q)) = e2.dot(p);
      }
      for (const Face& sub : detail::planarFaces(Q, eps)) {
        std::vector<int> lifted;
        lifted.reserve(sub.members.size());
        for (int q : sub.members) lifted.push_back(mem[static_cast<size_t>(q)]);
        std::sort(lifted.begin(), lifted.end());
        if (sub.dim == 1) {
          auto [it, fresh] = edges.emplace(lifted, nrm);
          if (!fresh) it->second += nrm;
        } else {
          auto [it, fresh] = verts.emplace(lifted[0], nrm);
          if (!fresh) it->second += nrm;
        }
      }
    }
    for (const auto& [mem, nrm] : edges) {
      Face f;
      f.dim = 1;
      f.members = mem;
      f.innerNormal = (frame * nrm).normalized();
      faces.push_back(std::move(f));
    }
    for (const auto& [idx, nrm] : verts) {
      Face f;
      f.dim = 0;
      f.members = {idx};
      f.innerNormal = (frame * nrm).normalized();
      faces.push_back(std::move(f));
    }
  }

  for (Face& f : faces) std::sort(f.members.begin(), f.members.end());
  return faces;
}

// Every proper face spans a simplex on its members.
inline bool isCombinatoriallySimplicial(const Spectrum& spec, double tol = 1e-9) {
  for (const Face& f : faceLattice(spec, tol))
    if (static_cast<int>(f.members.size()) != f.dim + 1) return false;
  return true;
}

inline SpectrumReport analyzeSpectrum(const Spectrum& spec, double tol = 1e-10) {
  SpectrumReport rep;
  const Mat lifted = buildLifted(spec);
  rep.d = affineDimension(lifted, tol);
  rep.circuitDefect = spec.t() - rep.d - 1;
  rep.pyramidal = isPyramidal(nullspaceBasis(lifted, tol), tol);
  rep.combinatoriallySimplicial = isCombinatoriallySimplicial(spec);
  return rep;
}

}  // namespace xic
