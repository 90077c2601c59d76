#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "xic/errors.hpp"

namespace xic::planar {

struct Pt {
  double x = 0.0, y = 0.0;
};

using Polyline = std::vector<Pt>;

inline double cross3(const Pt& o, const Pt& p, const Pt& q) {
  return (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x);
}

// Convex hull, monotone chain, counter-clockwise, no duplicate last point.
// Collinear points on the hull boundary are dropped.
inline std::vector<Pt> hull2d(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Pt& a, const Pt& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  const size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Pt> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross3(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  const size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross3(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Liang-Barsky clip of segment a..b against [-W, W]^2. Returns false when the
// segment misses the box, otherwise t0 <= t1 give the retained sub-segment.
inline bool clipSegment(const Pt& a, const Pt& b, double W, double& t0,
                        double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  const double d[2] = {b.x - a.x, b.y - a.y};
  const double s[2] = {a.x, a.y};
  for (int axis = 0; axis < 2; ++axis) {
    for (int side = 0; side < 2; ++side) {
      const double dir = side ? d[axis] : -d[axis];
      const double q = side ? (W - s[axis]) : (s[axis] + W);
      if (dir == 0.0) {
        if (q < 0) return false;
      } else {
        const double r = q / dir;
        if (dir < 0) {
          if (r > t1) return false;
          if (r > t0) t0 = r;
        } else {
          if (r < t0) return false;
          if (r < t1) t1 = r;
        }
      }
    }
  }
  return t0 <= t1;
}

namespace detail {

struct Seg {
  Pt a, b;
  std::vector<double> cuts;  // split parameters accumulated in (0, 1)
};

inline double dot2(double ax, double ay, double bx, double by) {
  return ax * bx + ay * by;
}

inline double pointSegDist(const Pt& p, const Pt& a, const Pt& b, double& t) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double L2 = dx * dx + dy * dy;
  t = L2 > 0 ? dot2(p.x - a.x, p.y - a.y, dx, dy) / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double qx = a.x + t * dx, qy = a.y + t * dy;
  return std::hypot(p.x - qx, p.y - qy);
}

// Records mutual split parameters for a pair of segments, including the
// near-parallel overlap case, where both endpoints of each segment project
// onto the other.
inline void intersectPair(Seg& s, Seg& r, double tol) {
  const double d1x = s.b.x - s.a.x, d1y = s.b.y - s.a.y;
  const double d2x = r.b.x - r.a.x, d2y = r.b.y - r.a.y;
  const double L1 = std::hypot(d1x, d1y), L2 = std::hypot(d2x, d2y);
  if (L1 == 0.0 || L2 == 0.0) return;
  const double denom = d1x * d2y - d1y * d2x;
  const double ex = r.a.x - s.a.x, ey = r.a.y - s.a.y;
  if (std::abs(denom) > 1e-12 * L1 * L2) {
    const double t = (ex * d2y - ey * d2x) / denom;
    const double u = (ex * d1y - ey * d1x) / denom;
    const double mt = tol / L1, mu = tol / L2;
    if (t >= -mt && t <= 1 + mt && u >= -mu && u <= 1 + mu) {
      s.cuts.push_back(std::clamp(t, 0.0, 1.0));
      r.cuts.push_back(std::clamp(u, 0.0, 1.0));
    }
    return;
  }
  // near parallel: only matters when the supporting lines nearly coincide
  double tt;
  if (pointSegDist(r.a, s.a, s.b, tt) > tol && pointSegDist(r.b, s.a, s.b, tt) > tol)
    return;
  for (const Pt& p : {r.a, r.b}) {
    const double t = dot2(p.x - s.a.x, p.y - s.a.y, d1x, d1y) / (L1 * L1);
    if (t > 0 && t < 1) s.cuts.push_back(t);
  }
  for (const Pt& p : {s.a, s.b}) {
    const double u = dot2(p.x - r.a.x, p.y - r.a.y, d2x, d2y) / (L2 * L2);
    if (u > 0 && u < 1) r.cuts.push_back(u);
  }
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(static_cast<size_t>(n)) {
    for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
  }
  int find(int x) {
    while (p[static_cast<size_t>(x)] != x) {
      p[static_cast<size_t>(x)] = p[static_cast<size_t>(p[static_cast<size_t>(x)])];
      x = p[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[static_cast<size_t>(a)] = b;
  }
};

}  // namespace detail

// Counts the regions of the arrangement of the given polylines inside
// [-W, W]^2 through the Euler relation: after splitting every crossing and
// snapping vertices, regions = E - V + C. The window border participates as
// four segments, so faces touching the border are ordinary faces.
inline int arrangementRegionCount(const std::vector<Polyline>& curves, double W,
                                  double snapTol = 0.0) {
  // The grid must sit below every true feature separation (tangent chains
  // near a cusp run microns apart) yet above rounding noise on vertices
  // computed twice; 1e-8 relative clears both by orders of magnitude.
  if (snapTol <= 0.0) snapTol = 1e-8 * W;

  // Chains joined at a cusp converge tangentially and hug each other below
  // the snap grid for a stretch before separating. Vertex snapping welds
  // rungs across that stretch and the Euler count reads the resulting
  // ladder cells as faces. Below the grid the two chains carry no mutual
  // information, so each is cut back to its first vertex clear of the
  // partner and rejoined to the shared point with a single chord.
  std::vector<Polyline> work(curves);
  const double hug = 2.0 * snapTol;
  const auto sepFromEnd = [&](const Polyline& c, bool back, size_t k,
                              const Polyline& o, bool oback) {
    const Pt& p = back ? c[c.size() - 1 - k] : c[k];
    double best = std::numeric_limits<double>::infinity();
    const size_t span = std::min(o.size() - 1, k + 64);
    for (size_t i = 0; i < span; ++i) {
      const Pt& a = oback ? o[o.size() - 1 - i] : o[i];
      const Pt& b = oback ? o[o.size() - 2 - i] : o[i + 1];
      double t;
      best = std::min(best, detail::pointSegDist(p, a, b, t));
    }
    return best;
  };
  const auto trimEnd = [&](Polyline& c, bool back, const Polyline& o,
                           bool oback) {
    size_t k = 1;
    while (k + 1 < c.size() && sepFromEnd(c, back, k, o, oback) <= hug) ++k;
    if (k < 2) return;
    if (back)
      c.erase(c.end() - static_cast<std::ptrdiff_t>(k), c.end() - 1);
    else
      c.erase(c.begin() + 1, c.begin() + static_cast<std::ptrdiff_t>(k));
  };
  for (size_t i = 0; i < work.size(); ++i)
    for (size_t j = i + 1; j < work.size(); ++j)
      for (int ei = 0; ei < 2; ++ei)
        for (int ej = 0; ej < 2; ++ej) {
          if (work[i].size() < 2 || work[j].size() < 2) continue;
          const Pt& pi = ei ? work[i].back() : work[i].front();
          const Pt& pj = ej ? work[j].back() : work[j].front();
          if (pi.x != pj.x || pi.y != pj.y) continue;
          trimEnd(work[i], ei != 0, work[j], ej != 0);
          trimEnd(work[j], ej != 0, work[i], ei != 0);
        }

  // Vertex runs denser than the snap grid carry no information at this
  // resolution, and sub-tolerance edges blow up the crossing acceptance
  // margin (tol / length). Thin to a minimum spacing, keeping the exact
  // first and last points so shared endpoints still unify bitwise.
  const double thin = 4.0 * snapTol;
  std::vector<detail::Seg> segs;
  for (const Polyline& c : work) {
    if (c.size() < 2) continue;
    Polyline t{c.front()};
    for (size_t i = 1; i + 1 < c.size(); ++i)
      if (std::hypot(c[i].x - t.back().x, c[i].y - t.back().y) >= thin)
        t.push_back(c[i]);
    if (t.size() > 1 &&
        std::hypot(c.back().x - t.back().x, c.back().y - t.back().y) < thin)
      t.back() = c.back();
    else
      t.push_back(c.back());
    for (size_t i = 0; i + 1 < t.size(); ++i) {
      double t0, t1;
      if (!clipSegment(t[i], t[i + 1], W, t0, t1)) continue;
      const Pt a{t[i].x + t0 * (t[i + 1].x - t[i].x),
                 t[i].y + t0 * (t[i + 1].y - t[i].y)};
      const Pt b{t[i].x + t1 * (t[i + 1].x - t[i].x),
                 t[i].y + t1 * (t[i + 1].y - t[i].y)};
      if (std::hypot(b.x - a.x, b.y - a.y) < 1e-14 * W) continue;
      segs.push_back({a, b, {}});
    }
  }
  const Pt corners[4] = {{-W, -W}, {W, -W}, {W, W}, {-W, W}};
  for (int i = 0; i < 4; ++i)
    segs.push_back({corners[i], corners[(i + 1) % 4], {}});

  // bucket prefilter for the pairwise intersection sweep
  const double cell = W / 64.0;
  const auto cellRange = [&](const detail::Seg& s, int& x0, int& x1, int& y0,
                             int& y1) {
    x0 = static_cast<int>(std::floor((std::min(s.a.x, s.b.x) + W) / cell));
    x1 = static_cast<int>(std::floor((std::max(s.a.x, s.b.x) + W) / cell));
    y0 = static_cast<int>(std::floor((std::min(s.a.y, s.b.y) + W) / cell));
    y1 = static_cast<int>(std::floor((std::max(s.a.y, s.b.y) + W) / cell));
  };
  std::unordered_map<int64_t, std::vector<int>> buckets;
  for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
    int x0, x1, y0, y1;
    cellRange(segs[static_cast<size_t>(i)], x0, x1, y0, y1);
    for (int x = x0; x <= x1; ++x)
      for (int y = y0; y <= y1; ++y)
        buckets[(static_cast<int64_t>(x) << 24) ^ y].push_back(i);
  }
  std::unordered_set<int64_t> seen;
  for (const auto& [key, list] : buckets)
    for (size_t i = 0; i < list.size(); ++i)
      for (size_t j = i + 1; j < list.size(); ++j) {
        const int a = std::min(list[i], list[j]), b = std::max(list[i], list[j]);
        if (!seen.insert((static_cast<int64_t>(a) << 32) | b).second) continue;
        detail::intersectPair(segs[static_cast<size_t>(a)],
                              segs[static_cast<size_t>(b)], snapTol);
      }

  // split at the recorded parameters, snap endpoints onto the vertex grid
  const auto vkey = [&](const Pt& p) {
    return (static_cast<int64_t>(std::llround(p.x / snapTol)) << 32) ^
           (static_cast<int64_t>(std::llround(p.y / snapTol)) & 0xffffffffLL);
  };
  std::unordered_map<int64_t, int> vid;
  std::vector<Pt> vpos;
  const auto vertexOf = [&](const Pt& p) {
    const int64_t k = vkey(p);
    auto it = vid.find(k);
    if (it != vid.end()) return it->second;
    const int id = static_cast<int>(vpos.size());
    vid.emplace(k, id);
    vpos.push_back({std::llround(p.x / snapTol) * snapTol,
                    std::llround(p.y / snapTol) * snapTol});
    return id;
  };

  struct Edge {
    int u, v;
    Pt a, b;
  };
  std::vector<Edge> pieces;
  for (detail::Seg& s : segs) {
    s.cuts.push_back(0.0);
    s.cuts.push_back(1.0);
    std::sort(s.cuts.begin(), s.cuts.end());
    for (size_t i = 0; i + 1 < s.cuts.size(); ++i) {
      const double t0 = s.cuts[i], t1 = s.cuts[i + 1];
      if (t1 - t0 <= 0.0) continue;
      const Pt a{s.a.x + t0 * (s.b.x - s.a.x), s.a.y + t0 * (s.b.y - s.a.y)};
      const Pt b{s.a.x + t1 * (s.b.x - s.a.x), s.a.y + t1 * (s.b.y - s.a.y)};
      const int u = vertexOf(a), v = vertexOf(b);
      if (u == v) continue;
      pieces.push_back({u, v, vpos[static_cast<size_t>(u)],
                        vpos[static_cast<size_t>(v)]});
    }
  }

  // vertices sitting on the interior of an edge split that edge; this closes
  // the T junctions the pairwise sweep leaves behind (an endpoint resting on
  // another segment within the snap tolerance)
  std::unordered_map<int64_t, std::vector<int>> vbuckets;
  const double vcell = std::max(cell / 8.0, 4.0 * snapTol);
  for (int i = 0; i < static_cast<int>(vpos.size()); ++i) {
    const Pt& p = vpos[static_cast<size_t>(i)];
    const int64_t kx = static_cast<int64_t>(std::floor((p.x + W) / vcell));
    const int64_t ky = static_cast<int64_t>(std::floor((p.y + W) / vcell));
    vbuckets[(kx << 24) ^ ky].push_back(i);
  }
  std::vector<Edge> finalEdges;
  for (const Edge& e : pieces) {
    const int x0 = static_cast<int>(std::floor((std::min(e.a.x, e.b.x) - snapTol + W) / vcell));
    const int x1 = static_cast<int>(std::floor((std::max(e.a.x, e.b.x) + snapTol + W) / vcell));
    const int y0 = static_cast<int>(std::floor((std::min(e.a.y, e.b.y) - snapTol + W) / vcell));
    const int y1 = static_cast<int>(std::floor((std::max(e.a.y, e.b.y) + snapTol + W) / vcell));
    std::vector<std::pair<double, int>> onEdge;
    for (int x = x0; x <= x1; ++x)
      for (int y = y0; y <= y1; ++y) {
        const auto it = vbuckets.find((static_cast<int64_t>(x) << 24) ^ y);
        if (it == vbuckets.end()) continue;
        for (int vi : it->second) {
          if (vi == e.u || vi == e.v) continue;
          double t;
          if (detail::pointSegDist(vpos[static_cast<size_t>(vi)], e.a, e.b, t) <=
                  snapTol &&
              t > 0 && t < 1)
            onEdge.push_back({t, vi});
        }
      }
    if (onEdge.empty()) {
      finalEdges.push_back(e);
      continue;
    }
    std::sort(onEdge.begin(), onEdge.end());
    int prev = e.u;
    for (const auto& [t, vi] : onEdge) {
      if (vi != prev)
        finalEdges.push_back({prev, vi, vpos[static_cast<size_t>(prev)],
                              vpos[static_cast<size_t>(vi)]});
      prev = vi;
    }
    if (prev != e.v)
      finalEdges.push_back({prev, e.v, vpos[static_cast<size_t>(prev)],
                            vpos[static_cast<size_t>(e.v)]});
  }

  // dedupe straight edges sharing both endpoints (collinear overlaps)
  std::unordered_set<int64_t> edgeKeys;
  std::vector<std::pair<int, int>> graph;
  for (const Edge& e : finalEdges) {
    const int a = std::min(e.u, e.v), b = std::max(e.u, e.v);
    if (a == b) continue;
    if (edgeKeys.insert((static_cast<int64_t>(a) << 32) | b).second)
      graph.push_back({a, b});
  }

  std::unordered_map<int, int> used;
  for (const auto& [u, v] : graph) {
    used.emplace(u, static_cast<int>(used.size()));
    used.emplace(v, static_cast<int>(used.size()));
  }
  const int V = static_cast<int>(used.size());
  const int E = static_cast<int>(graph.size());
  detail::UnionFind uf(V);
  for (const auto& [u, v] : graph) uf.unite(used[u], used[v]);
  std::unordered_set<int> roots;
  for (int i = 0; i < V; ++i) roots.insert(uf.find(i));
  const int C = static_cast<int>(roots.size());
  return E - V + C;
}

// ── raster route ────────────────────────────────────────────────────────────

struct FloodResult {
  int count = 0;
  int res = 0;
  std::vector<Pt> reps;                // deepest pixel centre per region
  std::vector<bool> touchesBorder;     // region reaches the window edge
  std::vector<double> clearancePx;     // rep distance to curve or edge, pixels
  std::vector<int32_t> label;          // on request: -2 barrier, else region id
  std::vector<char> counted;           // on request: id passed the depth rule
};

namespace detail {

// Supercover traversal: marks every cell the segment passes through and keeps
// the marked set 4-connected by filling both neighbours at corner crossings.
inline void rasterize(const Pt& a, const Pt& b, double W, int res,
                      std::vector<int32_t>& label) {
  const double h = 2.0 * W / res;
  const auto cellOf = [&](double x) {
    return std::clamp(static_cast<int>(std::floor((x + W) / h)), 0, res - 1);
  };
  int x = cellOf(a.x), y = cellOf(a.y);
  const int xe = cellOf(b.x), ye = cellOf(b.y);
  const int sx = (b.x > a.x) ? 1 : -1, sy = (b.y > a.y) ? 1 : -1;
  const double dx = std::abs(b.x - a.x), dy = std::abs(b.y - a.y);
  const auto mark = [&](int cx, int cy) {
    if (cx >= 0 && cx < res && cy >= 0 && cy < res)
      label[static_cast<size_t>(cy) * res + cx] = -2;
  };
  mark(x, y);
  // parametric distance to the next vertical / horizontal cell boundary
  double tmx, tmy;
  const double tdx = dx > 0 ? h / dx : std::numeric_limits<double>::infinity();
  const double tdy = dy > 0 ? h / dy : std::numeric_limits<double>::infinity();
  {
    const double bx = (sx > 0 ? (x + 1) * h - (a.x + W) : (a.x + W) - x * h);
    const double by = (sy > 0 ? (y + 1) * h - (a.y + W) : (a.y + W) - y * h);
    tmx = dx > 0 ? bx / dx : std::numeric_limits<double>::infinity();
    tmy = dy > 0 ? by / dy : std::numeric_limits<double>::infinity();
  }
  int guard = 4 * res + 8;
  while ((x != xe || y != ye) && guard-- > 0) {
    // endpoints on exact cell boundaries can step past the end cell; the
    // parametric coordinate then exceeds the segment and the walk is done
    if (tmx > 1.0 && tmy > 1.0) break;
    if (std::abs(tmx - tmy) < 1e-15) {
      mark(x + sx, y);
      mark(x, y + sy);
      x += sx;
      y += sy;
      tmx += tdx;
      tmy += tdy;
    } else if (tmx < tmy) {
      x += sx;
      tmx += tdx;
    } else {
      y += sy;
      tmy += tdy;
    }
    mark(x, y);
  }
  mark(xe, ye);
}

}  // namespace detail

// Independent region count: rasterize the curves as a barrier, flood fill the
// complement with 4-connectivity. A region counts only if some pixel sits at
// least two cells clear of the barrier; anything thinner is below the raster's
// resolving power (a pocket pinched off between two barrier bands where
// near-tangent curves pass through pixel scale), not a measured region.
// Representatives are the pixels deepest from curve and window edge alike,
// so the reported clearance disc is certified inside the observed region.
inline FloodResult floodFillRegions(const std::vector<Polyline>& curves,
                                    double W, int res, bool wantReps = false,
                                    Pt center = {0.0, 0.0},
                                    bool wantLabels = false) {
  FloodResult out;
  out.res = res;
  std::vector<int32_t> label(static_cast<size_t>(res) * res, -1);
  for (const Polyline& c : curves)
    for (size_t i = 0; i + 1 < c.size(); ++i) {
      const Pt p{c[i].x - center.x, c[i].y - center.y};
      const Pt q{c[i + 1].x - center.x, c[i + 1].y - center.y};
      double t0, t1;
      if (!clipSegment(p, q, W, t0, t1)) continue;
      const Pt a{p.x + t0 * (q.x - p.x), p.y + t0 * (q.y - p.y)};
      const Pt b{p.x + t1 * (q.x - p.x), p.y + t1 * (q.y - p.y)};
      detail::rasterize(a, b, W, res, label);
    }

  const auto propagate = [&](std::vector<int32_t>& d, std::queue<int>& q) {
    while (!q.empty()) {
      const int cur = q.front();
      q.pop();
      const int cx = cur % res, cy = cur / res;
      const int nb[4][2] = {{cx - 1, cy}, {cx + 1, cy}, {cx, cy - 1}, {cx, cy + 1}};
      for (const auto& n : nb) {
        if (n[0] < 0 || n[0] >= res || n[1] < 0 || n[1] >= res) continue;
        const size_t ni = static_cast<size_t>(n[1]) * res + n[0];
        if (d[ni] != -1) continue;
        d[ni] = d[static_cast<size_t>(cur)] + 1;
        q.push(static_cast<int>(ni));
      }
    }
  };

  // barrier distance transform (multi-source BFS), used for the pruning rule
  std::vector<int32_t> dist(static_cast<size_t>(res) * res, -1);
  {
    std::queue<int> bfs;
    for (size_t i = 0; i < label.size(); ++i)
      if (label[i] == -2) {
        dist[i] = 0;
        bfs.push(static_cast<int>(i));
      }
    if (bfs.empty())
      for (size_t i = 0; i < label.size(); ++i) dist[i] = res;
    propagate(dist, bfs);
  }

  // second transform with the window edge as an extra wall: a representative
  // certifies a disc inside the window only, so it must not crowd the border
  std::vector<int32_t> distB(static_cast<size_t>(res) * res, -1);
  {
    std::queue<int> bfs;
    for (size_t i = 0; i < label.size(); ++i)
      if (label[i] == -2) {
        distB[i] = 0;
        bfs.push(static_cast<int>(i));
      }
    const auto ring = [&](size_t i) {
      if (distB[i] == -1) {
        distB[i] = 1;
        bfs.push(static_cast<int>(i));
      }
    };
    for (int k = 0; k < res; ++k) {
      ring(static_cast<size_t>(k));
      ring(static_cast<size_t>(res - 1) * res + k);
      ring(static_cast<size_t>(k) * res);
      ring(static_cast<size_t>(k) * res + res - 1);
    }
    propagate(distB, bfs);
  }

  const double h = 2.0 * W / res;
  std::vector<int> stack;
  std::vector<char> counted;
  int provisional = 0;
  for (int iy = 0; iy < res; ++iy)
    for (int ix = 0; ix < res; ++ix) {
      const size_t idx = static_cast<size_t>(iy) * res + ix;
      if (label[idx] != -1) continue;
      const int id = provisional++;
      bool border = false;
      int maxD = 0, maxDB = 0;
      Pt rep{};
      label[idx] = id;
      stack.assign(1, static_cast<int>(idx));
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int cx = cur % res, cy = cur / res;
        if (cx == 0 || cy == 0 || cx == res - 1 || cy == res - 1) border = true;
        maxD = std::max(maxD, dist[static_cast<size_t>(cur)]);
        if (distB[static_cast<size_t>(cur)] > maxDB) {
          maxDB = distB[static_cast<size_t>(cur)];
          rep = Pt{center.x - W + (cx + 0.5) * h, center.y - W + (cy + 0.5) * h};
        }
        const int nb[4][2] = {{cx - 1, cy}, {cx + 1, cy}, {cx, cy - 1}, {cx, cy + 1}};
        for (const auto& n : nb) {
          if (n[0] < 0 || n[0] >= res || n[1] < 0 || n[1] >= res) continue;
          const size_t ni = static_cast<size_t>(n[1]) * res + n[0];
          if (label[ni] != -1) continue;
          label[ni] = id;
          stack.push_back(static_cast<int>(ni));
        }
      }
      counted.push_back(maxD >= 2 ? 1 : 0);
      if (maxD < 2) continue;  // sub-resolution pocket, not a region
      ++out.count;
      out.touchesBorder.push_back(border);
      if (wantReps) {
        out.reps.push_back(rep);
        out.clearancePx.push_back(maxDB);
      }
    }
  if (wantLabels) {
    out.label = std::move(label);
    out.counted = std::move(counted);
  }
  return out;
}

// ── sub-pixel refinement ──────────────────────────────────────────────────────

namespace detail {

// All pairwise polyline intersection points inside the window, by exact
// segment predicates. Adjacent segments of one chain are skipped; endpoint
// touches are kept (they coincide with endpoint features and cluster away).
inline std::vector<Pt> polylineCrossings(const std::vector<Polyline>& curves,
                                         double W) {
  struct Ref {
    int c, s;
  };
  const double cell = W / 64.0;
  std::unordered_map<int64_t, std::vector<Ref>> buckets;
  for (int ci = 0; ci < static_cast<int>(curves.size()); ++ci) {
    const Polyline& c = curves[static_cast<size_t>(ci)];
    for (int si = 0; si + 1 < static_cast<int>(c.size()); ++si) {
      const Pt& a = c[static_cast<size_t>(si)];
      const Pt& b = c[static_cast<size_t>(si) + 1];
      int x0 = static_cast<int>(std::floor((std::min(a.x, b.x) + W) / cell));
      int x1 = static_cast<int>(std::floor((std::max(a.x, b.x) + W) / cell));
      int y0 = static_cast<int>(std::floor((std::min(a.y, b.y) + W) / cell));
      int y1 = static_cast<int>(std::floor((std::max(a.y, b.y) + W) / cell));
      if (x1 < -1 || y1 < -1 || x0 > 128 || y0 > 128) continue;
      x0 = std::max(x0, -1);
      y0 = std::max(y0, -1);
      x1 = std::min(x1, 128);
      y1 = std::min(y1, 128);
      for (int x = x0; x <= x1; ++x)
        for (int y = y0; y <= y1; ++y)
          buckets[(static_cast<int64_t>(x) << 24) ^ y].push_back({ci, si});
    }
  }
  std::vector<Pt> out;
  std::unordered_set<int64_t> seen;
  for (const auto& [key, list] : buckets) {
    (void)key;
    for (size_t i = 0; i < list.size(); ++i)
      for (size_t j = i + 1; j < list.size(); ++j) {
        const Ref A = list[i], B = list[j];
        if (A.c == B.c && std::abs(A.s - B.s) <= 1) continue;
        const int64_t ka = (static_cast<int64_t>(A.c) << 24) | A.s;
        const int64_t kb = (static_cast<int64_t>(B.c) << 24) | B.s;
        const int64_t pk = ka < kb ? (ka << 32) | kb : (kb << 32) | ka;
        if (!seen.insert(pk).second) continue;
        const Pt& a = curves[static_cast<size_t>(A.c)][static_cast<size_t>(A.s)];
        const Pt& b = curves[static_cast<size_t>(A.c)][static_cast<size_t>(A.s) + 1];
        const Pt& c = curves[static_cast<size_t>(B.c)][static_cast<size_t>(B.s)];
        const Pt& d = curves[static_cast<size_t>(B.c)][static_cast<size_t>(B.s) + 1];
        const double rx = b.x - a.x, ry = b.y - a.y;
        const double sx = d.x - c.x, sy = d.y - c.y;
        const double den = rx * sy - ry * sx;
        if (den == 0.0) continue;
        const double qx = c.x - a.x, qy = c.y - a.y;
        const double t = (qx * sy - qy * sx) / den;
        const double u = (qx * ry - qy * rx) / den;
        if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
        const Pt p{a.x + t * rx, a.y + t * ry};
        if (std::abs(p.x) <= W && std::abs(p.y) <= W) out.push_back(p);
      }
  }
  return out;
}

}  // namespace detail

struct ZoomAdjust {
  int delta = 0;                  // regions invisible at the coarse resolution
  std::vector<Pt> reps;           // one representative per such region
  std::vector<double> clearance;  // certified disc radius, window units
  bool stable = true;             // every refined window reached a stable count
};

// Raster refinement pass for structure finer than the global pixel. Curve
// features (chain endpoints, pairwise crossings, tiny closed loops) that
// crowd within a few pixels of each other mark places where whole chambers
// can hide inside the rasterized barrier band. Each such cluster is
// re-flooded in a small window at a far finer pixel; a refined region counts
// as new when none of its pixels lands on a counted free pixel of the
// global raster. The pass never consults the arrangement, so the two routes
// stay independent.
inline ZoomAdjust floodZoomAdjust(const std::vector<Polyline>& curves, double W,
                                  const FloodResult& global) {
  ZoomAdjust out;
  if (global.label.empty()) return out;
  const double h = 2.0 * W / global.res;

  std::vector<Pt> feats;
  std::vector<char> loopish;
  for (const Polyline& c : curves) {
    if (c.size() < 2) continue;
    feats.push_back(c.front());
    loopish.push_back(0);
    feats.push_back(c.back());
    loopish.push_back(0);
    if (c.front().x == c.back().x && c.front().y == c.back().y) {
      double x0 = c[0].x, x1 = c[0].x, y0 = c[0].y, y1 = c[0].y;
      for (const Pt& p : c) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
      }
      if (std::hypot(x1 - x0, y1 - y0) < 8.0 * h) {
        feats.push_back({(x0 + x1) / 2, (y0 + y1) / 2});
        loopish.push_back(1);
      }
    }
  }
  for (const Pt& p : detail::polylineCrossings(curves, W)) {
    feats.push_back(p);
    loopish.push_back(0);
  }

  // cluster features that crowd within a few pixels
  const int F = static_cast<int>(feats.size());
  detail::UnionFind uf(F);
  for (int i = 0; i < F; ++i)
    for (int j = i + 1; j < F; ++j)
      if (std::hypot(feats[static_cast<size_t>(i)].x - feats[static_cast<size_t>(j)].x,
                     feats[static_cast<size_t>(i)].y - feats[static_cast<size_t>(j)].y) <=
          4.0 * h)
        uf.unite(i, j);
  std::unordered_map<int, std::vector<int>> groups;
  for (int i = 0; i < F; ++i) groups[uf.find(i)].push_back(i);

  struct Win {
    Pt c;
    double s;
  };
  std::vector<Win> wins;
  for (const auto& [root, members] : groups) {
    (void)root;
    bool hasLoop = false;
    for (int m : members) hasLoop |= loopish[static_cast<size_t>(m)] != 0;
    if (members.size() < 2 && !hasLoop) continue;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (int m : members) {
      const Pt& p = feats[static_cast<size_t>(m)];
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    const double D = std::hypot(x1 - x0, y1 - y0);
    if (D > 32.0 * h) continue;  // resolvable structure, not a hidden pocket
    const double s = std::max(2.0 * D, 8.0 * h);
    Pt c{(x0 + x1) / 2, (y0 + y1) / 2};
    c.x = std::clamp(c.x, -W + s, W - s);
    c.y = std::clamp(c.y, -W + s, W - s);
    wins.push_back({c, s});
  }

  // merge overlapping refinement windows so nothing is counted twice
  for (bool merged = true; merged;) {
    merged = false;
    for (size_t i = 0; i < wins.size() && !merged; ++i)
      for (size_t j = i + 1; j < wins.size() && !merged; ++j) {
        if (std::abs(wins[i].c.x - wins[j].c.x) > wins[i].s + wins[j].s ||
            std::abs(wins[i].c.y - wins[j].c.y) > wins[i].s + wins[j].s)
          continue;
        const double x0 = std::min(wins[i].c.x - wins[i].s, wins[j].c.x - wins[j].s);
        const double x1 = std::max(wins[i].c.x + wins[i].s, wins[j].c.x + wins[j].s);
        const double y0 = std::min(wins[i].c.y - wins[i].s, wins[j].c.y - wins[j].s);
        const double y1 = std::max(wins[i].c.y + wins[i].s, wins[j].c.y + wins[j].s);
        Win w{{(x0 + x1) / 2, (y0 + y1) / 2},
              std::max((x1 - x0) / 2, (y1 - y0) / 2)};
        w.c.x = std::clamp(w.c.x, -W + w.s, W - w.s);
        w.c.y = std::clamp(w.c.y, -W + w.s, W - w.s);
        wins[i] = w;
        wins.erase(wins.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
      }
  }

  for (const Win& w : wins) {
    // refine until two consecutive resolutions report the same count
    FloodResult fine, prev;
    bool settled = false;
    for (int lres : {512, 1024, 2048, 4096}) {
      fine = floodFillRegions(curves, w.s, lres, true, w.c, true);
      if (prev.res > 0 && fine.count == prev.count) {
        settled = true;
        break;
      }
      prev = fine;
    }
    if (!settled) {
      out.stable = false;
      continue;
    }
    // a refined region is new when it never overlaps counted global free space
    const int L = fine.res;
    const double hl = 2.0 * w.s / L;
    std::vector<char> seenGlobal(fine.counted.size(), 0);
    for (int iy = 0; iy < L; ++iy)
      for (int ix = 0; ix < L; ++ix) {
        const int32_t id = fine.label[static_cast<size_t>(iy) * L + ix];
        if (id < 0 || !fine.counted[static_cast<size_t>(id)]) continue;
        const double ax = w.c.x - w.s + (ix + 0.5) * hl;
        const double ay = w.c.y - w.s + (iy + 0.5) * hl;
        const int gx = std::clamp(static_cast<int>(std::floor((ax + W) / h)), 0,
                                  global.res - 1);
        const int gy = std::clamp(static_cast<int>(std::floor((ay + W) / h)), 0,
                                  global.res - 1);
        const int32_t gl =
            global.label[static_cast<size_t>(gy) * global.res + gx];
        if (gl >= 0 && global.counted[static_cast<size_t>(gl)])
          seenGlobal[static_cast<size_t>(id)] = 1;
      }
    int rep = 0;
    for (size_t id = 0; id < fine.counted.size(); ++id) {
      if (!fine.counted[id]) continue;
      const int k = rep++;
      if (seenGlobal[id]) continue;
      ++out.delta;
      out.reps.push_back(fine.reps[static_cast<size_t>(k)]);
      out.clearance.push_back(fine.clearancePx[static_cast<size_t>(k)] * hl);
    }
  }
  return out;
}

}  // namespace xic::planar
