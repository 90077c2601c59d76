#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xic/completion.hpp"
#include "xic/planar.hpp"

namespace xic {

struct Chamber {
  planar::Pt rep;
  bool bounded = false;
  double clearance = 0.0;  // distance from rep to the nearest curve, window units
};

struct ChamberCount {
  int count = 0;
  int arrangementCount = 0;
  int floodCount = 0;
  int floodResolution = 0;
  std::vector<Chamber> chambers;
};

// Polylines of a completed contour for the counting and drawing backends:
// the traced arcs plus one long chord per facet line, admissible ones only
// when requested. Chords extend well past the window; the backends clip.
inline std::vector<planar::Polyline> contourPolylines(const CompletedContour& cc,
                                                      double W,
                                                      bool admissibleOnly = true) {
  std::vector<planar::Polyline> out;
  for (const ContourArc& arc : cc.arcs) {
    planar::Polyline pl;
    pl.reserve(arc.polyline.size());
    for (const Vec& v : arc.polyline) pl.push_back({v(0), v(1)});
    if (pl.size() >= 2) out.push_back(std::move(pl));
  }
  for (const FacetLine& ln : cc.lines) {
    if (admissibleOnly && !ln.admissible) continue;
    const double n2 = ln.mu.squaredNorm();
    if (n2 == 0.0) continue;
    const planar::Pt base{ln.mu(0) * ln.offset / n2, ln.mu(1) * ln.offset / n2};
    const double nn = std::sqrt(n2);
    const planar::Pt dir{-ln.mu(1) / nn, ln.mu(0) / nn};
    const double reach = 4.0 * W;
    out.push_back({{base.x - reach * dir.x, base.y - reach * dir.y},
                   {base.x + reach * dir.x, base.y + reach * dir.y}});
  }
  return out;
}

using ContourGenerator = std::function<CompletedContour(double)>;

// Counts the chambers cut out by a completed signed contour through two
// independent routes that must agree exactly:
//   - planar arrangement of the clipped polylines, regions by Euler count
//   - raster flood fill over the rasterized curves
// The window is certified by recomputing the arrangement count on a doubled
// window (the generator retraces the contour clipped to the larger window);
// a changed count means unresolved features outside the window. A raster
// disagreement escalates the resolution twice before it becomes an error,
// since thin slivers can fall below the pixel size, but a persistent
// mismatch is never swallowed.
inline ChamberCount countChambers(const ContourGenerator& gen, double window,
                                  int res = 2048) {
  const CompletedContour cc = gen(window);
  const auto curves = contourPolylines(cc, window);
  ChamberCount out;
  out.arrangementCount = planar::arrangementRegionCount(curves, window);

  {
    const CompletedContour ccBig = gen(2.0 * window);
    const auto curvesBig = contourPolylines(ccBig, 2.0 * window);
    const int arrBig = planar::arrangementRegionCount(curvesBig, 2.0 * window);
    if (arrBig != out.arrangementCount)
      throw WindowTooSmall("chamber count changed on the doubled window");
  }

  planar::FloodResult flood;
  for (int grow = 1; grow <= 4; grow *= 2) {
    flood = planar::floodFillRegions(curves, window, res * grow, true);
    if (flood.count == out.arrangementCount) break;
  }
  out.floodCount = flood.count;
  out.floodResolution = flood.res;

  // Whole chambers can hide inside the rasterized barrier band when curve
  // features crowd below pixel scale. A local refinement pass around such
  // feature clusters settles whether the raster missed sub-pixel regions;
  // it works from the curves and the raster alone, never the arrangement.
  planar::ZoomAdjust zoom;
  if (out.floodCount != out.arrangementCount) {
    flood = planar::floodFillRegions(curves, window, flood.res, true, {0.0, 0.0},
                                     true);
    zoom = planar::floodZoomAdjust(curves, window, flood);
    out.floodCount += zoom.delta;
  }
  if (out.floodCount != out.arrangementCount)
    throw DualCountMismatch("arrangement and flood fill disagree at full resolution");

  out.count = out.arrangementCount;
  const double h = 2.0 * window / flood.res;
  for (size_t i = 0; i < flood.reps.size(); ++i)
    out.chambers.push_back({flood.reps[i], !flood.touchesBorder[i],
                            flood.clearancePx[i] * h});
  for (size_t i = 0; i < zoom.reps.size(); ++i)
    out.chambers.push_back({zoom.reps[i], true, zoom.clearance[i]});
  return out;
}

// ── closed form bounds ──────────────────────────────────────────────────────

// Regions of the plane cut by m lines in general position.
inline int steinerRegions(int m) { return m * (m - 1) / 2 + m + 1; }

struct CuspCurveBound {
  int intersections = 0;
  int components = 0;
};

// Degree based bounds for a plane curve of degree l with the two point
// conditions already removed.
inline CuspCurveBound cuspCurveBound(int l) {
  return {l * (l + 1) / 2 - (l + 1), l * (l + 1) / 2 - l + 1};
}

// Chambers of a reduced signed discriminant contour in the circuit row span.
inline int chamberBound(int n) { return (n * n - n) / 2 + 1; }

// Isotopy classes of smooth zero sets over all coefficient choices.
inline int isotopyBound(int n) { return (n * n + 3 * n) / 2 + 6; }

struct BoundComparison {
  int n = 0;
  int predictedBound = 0;
  int observedMax = 0;
  bool consistent = false;
};

// Report only: the predicted chamber bound against what counting actually
// produced. An inconsistent report is surfaced, not asserted away.
inline BoundComparison boundComparison(int n, const std::vector<int>& observedCounts) {
  BoundComparison rep;
  rep.n = n;
  rep.predictedBound = chamberBound(n);
  for (int c : observedCounts) rep.observedMax = std::max(rep.observedMax, c);
  rep.consistent = rep.observedMax <= rep.predictedBound;
  return rep;
}

// ── smooth sub-arc crossing hypothesis ──────────────────────────────────────

struct SubArcPair {
  int a = 0;
  int b = 0;
  int crossings = 0;      // distinct intersection points, shared cusps excluded
  bool sharesCusp = false;
};

struct SubArcReport {
  std::vector<SubArcPair> pairs;  // only pairs with at least one crossing
  int maxCrossings = 0;
  int violations = 0;  // pairs crossing twice, or cusp-sharing pairs crossing at all
};

namespace detail {

inline bool segSegPoint(const planar::Pt& a, const planar::Pt& b,
                        const planar::Pt& c, const planar::Pt& d, planar::Pt* out) {
  const double rx = b.x - a.x, ry = b.y - a.y;
  const double sx = d.x - c.x, sy = d.y - c.y;
  const double den = rx * sy - ry * sx;
  const double l1 = std::abs(rx) + std::abs(ry), l2 = std::abs(sx) + std::abs(sy);
  if (std::abs(den) <= 1e-12 * l1 * l2) return false;  // parallel or degenerate
  const double qx = c.x - a.x, qy = c.y - a.y;
  const double t = (qx * sy - qy * sx) / den;
  const double u = (qx * ry - qy * rx) / den;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return false;
  *out = {a.x + t * rx, a.y + t * ry};
  return true;
}

}  // namespace detail

// Checks the transversality hypothesis that two distinct smooth sub-arcs meet
// at most once. Intersection points closer than 1e-6 * window are one point;
// a shared cusp endpoint does not count as a crossing, but a cusp-sharing
// pair that meets anywhere else is flagged. Report only, nothing throws.
inline SubArcReport hypothesisCheck(const std::vector<ContourArc>& arcs,
                                    double window) {
  const double tol = 1e-6 * window;
  SubArcReport rep;
  // Bucket the segments of every arc on one shared grid.
  const double cell = window / 32.0;
  struct SegRef {
    int arc;
    int seg;
  };
  std::unordered_map<long long, std::vector<SegRef>> grid;
  auto key = [&](long long gx, long long gy) { return (gx << 24) ^ gy; };
  for (int ai = 0; ai < static_cast<int>(arcs.size()); ++ai) {
    const auto& pl = arcs[ai].polyline;
    for (int si = 0; si + 1 < static_cast<int>(pl.size()); ++si) {
      const double x0 = std::min(pl[si](0), pl[si + 1](0));
      const double x1 = std::max(pl[si](0), pl[si + 1](0));
      const double y0 = std::min(pl[si](1), pl[si + 1](1));
      const double y1 = std::max(pl[si](1), pl[si + 1](1));
      for (long long gx = std::llround(std::floor(x0 / cell));
           gx <= std::llround(std::floor(x1 / cell)); ++gx)
        for (long long gy = std::llround(std::floor(y0 / cell));
             gy <= std::llround(std::floor(y1 / cell)); ++gy)
          grid[key(gx, gy)].push_back({ai, si});
    }
  }
  std::map<std::pair<int, int>, std::vector<planar::Pt>> hits;
  std::set<std::tuple<int, int, int, int>> seen;
  for (const auto& [k, refs] : grid) {
    (void)k;
    for (size_t p = 0; p < refs.size(); ++p)
      for (size_t q = p + 1; q < refs.size(); ++q) {
        const SegRef A = refs[p], B = refs[q];
        if (A.arc == B.arc) continue;
        const SegRef lo = A.arc < B.arc ? A : B, hi = A.arc < B.arc ? B : A;
        if (!seen.insert({lo.arc, lo.seg, hi.arc, hi.seg}).second) continue;
        const auto& pa = arcs[lo.arc].polyline;
        const auto& pb = arcs[hi.arc].polyline;
        planar::Pt x;
        if (detail::segSegPoint({pa[lo.seg](0), pa[lo.seg](1)},
                                {pa[lo.seg + 1](0), pa[lo.seg + 1](1)},
                                {pb[hi.seg](0), pb[hi.seg](1)},
                                {pb[hi.seg + 1](0), pb[hi.seg + 1](1)}, &x))
          hits[{lo.arc, hi.arc}].push_back(x);
      }
  }
  auto endpoints = [&](int ai) {
    std::vector<planar::Pt> ends;
    const auto& pl = arcs[ai].polyline;
    if (arcs[ai].cuspAtStart && !pl.empty()) ends.push_back({pl.front()(0), pl.front()(1)});
    if (arcs[ai].cuspAtEnd && !pl.empty()) ends.push_back({pl.back()(0), pl.back()(1)});
    return ends;
  };
  for (auto& [pr, pts] : hits) {
    // Cluster near-coincident intersection points.
    std::sort(pts.begin(), pts.end(), [](const planar::Pt& u, const planar::Pt& v) {
      return u.x != v.x ? u.x < v.x : u.y < v.y;
    });
    std::vector<planar::Pt> reps;
    for (const planar::Pt& pt : pts) {
      bool fresh = true;
      for (const planar::Pt& r : reps)
        if (std::abs(pt.x - r.x) <= tol && std::abs(pt.y - r.y) <= tol) {
          fresh = false;
          break;
        }
      if (fresh) reps.push_back(pt);
    }
    SubArcPair out{pr.first, pr.second, 0, false};
    std::vector<planar::Pt> shared;
    for (const planar::Pt& ea : endpoints(pr.first))
      for (const planar::Pt& eb : endpoints(pr.second))
        if (std::abs(ea.x - eb.x) <= tol && std::abs(ea.y - eb.y) <= tol) {
          out.sharesCusp = true;
          shared.push_back(ea);
        }
    for (const planar::Pt& r : reps) {
      bool atCusp = false;
      for (const planar::Pt& s : shared)
        if (std::abs(r.x - s.x) <= 2.0 * tol && std::abs(r.y - s.y) <= 2.0 * tol)
          atCusp = true;
      if (!atCusp) ++out.crossings;
    }
    if (out.crossings > 0) rep.pairs.push_back(out);
    rep.maxCrossings = std::max(rep.maxCrossings, out.crossings);
    if (out.crossings > 1 || (out.sharesCusp && out.crossings > 0)) ++rep.violations;
  }
  return rep;
}

}  // namespace xic
