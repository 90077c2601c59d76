#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>
#include <vector>

#include "xic/parametrization.hpp"
#include "xic/planar.hpp"
#include "xic/signclass.hpp"
#include "xic/spectrum.hpp"

namespace xic {

// Exponential sum sum_j c_j exp(<a_j, y>) with real exponents. Coefficients
// are canonicalized so the first nonzero one is positive; the zero set only
// depends on c up to a global sign.
struct ExpSum {
  Mat A;
  Vec c;

  int n() const { return static_cast<int>(A.rows()); }
  int t() const { return static_cast<int>(A.cols()); }

  static ExpSum make(Mat A, Vec c) {
    if (A.cols() != c.size()) throw Error("coefficient count mismatch");
    for (int j = 0; j < c.size(); ++j)
      if (c(j) != 0.0) {
        if (c(j) < 0.0) c = -c;
        break;
      }
    return {std::move(A), std::move(c)};
  }

  SignClass signClass() const {
    std::vector<int> s(static_cast<size_t>(c.size()));
    for (int j = 0; j < c.size(); ++j)
      s[static_cast<size_t>(j)] = c(j) > 0 ? 1 : (c(j) < 0 ? -1 : 0);
    return SignClass::canonical(s);
  }
};

// Coefficients for the zero set attached to a contour point: the minimum
// norm kernel lift u = B v with signs sigma.
inline Vec liftToCoefficients(const NullBasis& basis, const SignClass& sigma,
                              const Vec& v) {
  if (sigma.size() != basis.t()) throw Error("sign class length mismatch");
  if (v.size() != basis.m()) throw Error("lift point dimension mismatch");
  const Vec u = basis.B * v;
  Vec c(basis.t());
  for (int j = 0; j < basis.t(); ++j)
    c(j) = sigma.s[static_cast<size_t>(j)] * std::exp(u(j));
  return c;
}

// Guarded evaluation: the largest exponent is factored out so the sum itself
// stays in range; only the final rescale can overflow.
inline double evalExpSum(const ExpSum& f, const Vec& y) {
  const Vec e = f.A.transpose() * y;
  const double m = e.maxCoeff();
  double s = 0.0;
  for (int j = 0; j < f.t(); ++j) s += f.c(j) * std::exp(e(j) - m);
  return s * std::exp(m);
}

// Sign of f at y, exact zeros counting as positive.
inline int evalExpSumSign(const ExpSum& f, const Vec& y) {
  const Vec e = f.A.transpose() * y;
  const double m = e.maxCoeff();
  double s = 0.0;
  for (int j = 0; j < f.t(); ++j) s += f.c(j) * std::exp(e(j) - m);
  return s < 0.0 ? -1 : 1;
}

// Softmax weighted average of the spectrum points; lands in the interior of
// the exponent polytope and approaches a face as the matching terms dominate.
inline Vec momentMap(const Mat& A, const Vec& y) {
  const Vec e = A.transpose() * y;
  const double m = e.maxCoeff();
  double tot = 0.0;
  Vec acc = Vec::Zero(A.rows());
  for (int j = 0; j < A.cols(); ++j) {
    const double w = std::exp(e(j) - m);
    tot += w;
    acc += w * A.col(j);
  }
  return acc / tot;
}

inline Vec momentMap(const Spectrum& spec, const Vec& y) {
  return momentMap(spec.A, y);
}

inline Vec momentMap(const ExpSum& f, const Vec& y) { return momentMap(f.A, y); }

// ── topology signature ──────────────────────────────────────────────────────

struct TopologySignature {
  int componentCount = 0;
  int compactComponentCount = 0;
  bool resolutionWarning = false;
  double window = 0.0;
  int grid = 0;

  bool operator==(const TopologySignature& o) const {
    return componentCount == o.componentCount &&
           compactComponentCount == o.compactComponentCount;
  }
  bool operator!=(const TopologySignature& o) const { return !(*this == o); }
};

struct SignatureOptions {
  int grid = 1024;         // cells per axis
  double window = 6.0;     // initial half width of the evaluation box
  double windowCap = 48.0;
  double deltaRel = 5e-3;  // compactness margin, relative to diam conv(A)
};

namespace detail {

struct ZeroScan {
  int components = 0;
  int compact = 0;
};

struct CrossingUF {
  std::unordered_map<int64_t, int> index;
  std::vector<int> parent;
  int at(int64_t key) {
    auto [it, fresh] = index.emplace(key, static_cast<int>(parent.size()));
    if (fresh) parent.push_back(it->second);
    return it->second;
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] =
          parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<size_t>(a)] = b;
  }
};

inline double polygonBoundaryDist(const std::vector<planar::Pt>& poly,
                                  const planar::Pt& p) {
  double best = std::numeric_limits<double>::max();
  const size_t H = poly.size();
  if (H == 1) return std::hypot(p.x - poly[0].x, p.y - poly[0].y);
  for (size_t i = 0; i < H; ++i) {
    double t;
    best = std::min(best, planar::detail::pointSegDist(p, poly[i],
                                                       poly[(i + 1) % H], t));
  }
  return best;
}

// Marching squares over a separable evaluation of the sum. Values on the
// (res+1)^2 grid come from per-axis factor tables, so the cost is one exp per
// table entry instead of one per pixel. Component identity is tracked by
// union find on edge crossings; the ambiguous saddle cell is resolved with a
// centre evaluation. Compactness of a component means every crossing on it
// maps at least delta away from the polytope boundary under the moment map.
inline ZeroScan scanZeroSet(const ExpSum& f, double W, int res, double delta,
                            const std::vector<planar::Pt>& poly) {
  const int N = res + 1;
  const int t = f.t();
  std::vector<double> xs(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) xs[static_cast<size_t>(i)] = -W + 2.0 * W * i / res;

  // factor tables with per axis and per term max subtraction
  std::vector<std::vector<double>> R(static_cast<size_t>(t)),
      C(static_cast<size_t>(t));
  std::vector<double> coeff(static_cast<size_t>(t));
  double shift = -std::numeric_limits<double>::infinity();
  std::vector<double> mx(static_cast<size_t>(t)), my(static_cast<size_t>(t));
  for (int j = 0; j < t; ++j) {
    const double a1 = f.A(0, j), a2 = f.A(1, j);
    mx[static_cast<size_t>(j)] = std::max(a1 * xs.front(), a1 * xs.back());
    my[static_cast<size_t>(j)] = std::max(a2 * xs.front(), a2 * xs.back());
    shift = std::max(shift, mx[static_cast<size_t>(j)] + my[static_cast<size_t>(j)]);
  }
  for (int j = 0; j < t; ++j) {
    coeff[static_cast<size_t>(j)] =
        f.c(j) * std::exp(mx[static_cast<size_t>(j)] + my[static_cast<size_t>(j)] - shift);
    R[static_cast<size_t>(j)].resize(static_cast<size_t>(N));
    C[static_cast<size_t>(j)].resize(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
      R[static_cast<size_t>(j)][static_cast<size_t>(i)] =
          std::exp(f.A(0, j) * xs[static_cast<size_t>(i)] - mx[static_cast<size_t>(j)]);
      C[static_cast<size_t>(j)][static_cast<size_t>(i)] =
          std::exp(f.A(1, j) * xs[static_cast<size_t>(i)] - my[static_cast<size_t>(j)]);
    }
  }
  std::vector<double> vals(static_cast<size_t>(N) * N);
  std::vector<double> wj(static_cast<size_t>(t));
  for (int iy = 0; iy < N; ++iy) {
    for (int j = 0; j < t; ++j)
      wj[static_cast<size_t>(j)] =
          coeff[static_cast<size_t>(j)] * C[static_cast<size_t>(j)][static_cast<size_t>(iy)];
    double* row = vals.data() + static_cast<size_t>(iy) * N;
    for (int ix = 0; ix < N; ++ix) {
      double s = 0.0;
      for (int j = 0; j < t; ++j)
        s += wj[static_cast<size_t>(j)] * R[static_cast<size_t>(j)][static_cast<size_t>(ix)];
      row[ix] = s;
    }
  }
  const auto sgn = [&](int ix, int iy) -> int {
    const double v = vals[static_cast<size_t>(iy) * N + ix];
    if (v != 0.0) return v < 0.0 ? -1 : 1;
    Vec y(2);
    y << xs[static_cast<size_t>(ix)], xs[static_cast<size_t>(iy)];
    return evalExpSumSign(f, y);  // scale underflowed; decide pointwise
  };

  // edge crossing ids: horizontal edges even, vertical odd
  const auto hid = [&](int ix, int iy) {
    return (static_cast<int64_t>(iy) * N + ix) * 2;
  };
  const auto vid = [&](int ix, int iy) {
    return (static_cast<int64_t>(iy) * N + ix) * 2 + 1;
  };
  CrossingUF uf;
  std::unordered_map<int64_t, planar::Pt> where;
  const auto crossingPt = [&](int ix, int iy, bool horiz) {
    const double v1 = vals[static_cast<size_t>(iy) * N + ix];
    const double v2 = horiz ? vals[static_cast<size_t>(iy) * N + ix + 1]
                            : vals[(static_cast<size_t>(iy) + 1) * N + ix];
    const double den = v1 - v2;
    const double u = den != 0.0 ? std::clamp(v1 / den, 0.0, 1.0) : 0.5;
    const double x0 = xs[static_cast<size_t>(ix)], y0 = xs[static_cast<size_t>(iy)];
    const double h = 2.0 * W / res;
    return horiz ? planar::Pt{x0 + u * h, y0} : planar::Pt{x0, y0 + u * h};
  };

  for (int iy = 0; iy < res; ++iy)
    for (int ix = 0; ix < res; ++ix) {
      const int s00 = sgn(ix, iy), s10 = sgn(ix + 1, iy);
      const int s01 = sgn(ix, iy + 1), s11 = sgn(ix + 1, iy + 1);
      int64_t cr[4];
      int nc = 0;
      if (s00 != s10) cr[nc++] = hid(ix, iy);
      if (s10 != s11) cr[nc++] = vid(ix + 1, iy);
      if (s01 != s11) cr[nc++] = hid(ix, iy + 1);
      if (s00 != s01) cr[nc++] = vid(ix, iy);
      if (nc == 0) continue;
      for (int q = 0; q < nc; ++q)
        if (!where.count(cr[q])) {
          const bool horiz = (cr[q] % 2) == 0;
          const int64_t cellIdx = cr[q] / 2;
          where[cr[q]] = crossingPt(static_cast<int>(cellIdx % N),
                                    static_cast<int>(cellIdx / N), horiz);
        }
      if (nc == 2) {
        uf.unite(uf.at(cr[0]), uf.at(cr[1]));
      } else {
        // saddle: bottom,right,top,left in cr order is not guaranteed, so
        // recompute explicitly
        const int64_t bottom = hid(ix, iy), top = hid(ix, iy + 1);
        const int64_t left = vid(ix, iy), right = vid(ix + 1, iy);
        Vec yc(2);
        yc << xs[static_cast<size_t>(ix)] + W / res,
            xs[static_cast<size_t>(iy)] + W / res;
        const int sc = evalExpSumSign(f, yc);
        if (sc == s00) {
          uf.unite(uf.at(bottom), uf.at(right));
          uf.unite(uf.at(top), uf.at(left));
        } else {
          uf.unite(uf.at(bottom), uf.at(left));
          uf.unite(uf.at(top), uf.at(right));
        }
      }
    }

  std::unordered_map<int, double> minMoment;
  for (const auto& [key, pt] : where) {
    const int root = uf.find(uf.at(key));
    Vec y(2);
    y << pt.x, pt.y;
    const Vec mm = momentMap(f, y);
    const double d = polygonBoundaryDist(poly, {mm(0), mm(1)});
    auto [it, fresh] = minMoment.emplace(root, d);
    if (!fresh) it->second = std::min(it->second, d);
  }
  ZeroScan out;
  out.components = static_cast<int>(minMoment.size());
  for (const auto& [root, d] : minMoment)
    if (d >= delta) ++out.compact;
  return out;
}

}  // namespace detail

// Counts connected components of the zero set and how many are compact.
// The evaluation box doubles until the signature is stable under further
// doubling; the grid then doubles once as a resolution cross-check, and a
// disagreement flags the result and refines once more.
inline TopologySignature topologySignature(const ExpSum& f,
                                           const SignatureOptions& opts = {});

struct RootCount {
  int count = 0;
  int descartesBound = 0;
  bool resolutionWarning = false;
};

// Zero count of a one variable sum by adaptive sign counting on a dominance
// bounded interval, reported next to the Descartes style alternation bound.
inline RootCount univariateRootCount(const ExpSum& f) {
  if (f.n() != 1) throw Error("root count is for one variable sums");
  std::vector<int> idx;
  for (int j = 0; j < f.t(); ++j)
    if (f.c(j) != 0.0) idx.push_back(j);
  RootCount out;
  if (idx.size() <= 1) return out;
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return f.A(0, a) < f.A(0, b); });
  for (size_t q = 0; q + 1 < idx.size(); ++q)
    if ((f.c(idx[q]) > 0) != (f.c(idx[q + 1]) > 0)) ++out.descartesBound;

  const int first = idx.front(), last = idx.back();
  double sumNotFirst = 0.0, sumNotLast = 0.0;
  for (int j : idx) {
    if (j != first) sumNotFirst += std::abs(f.c(j));
    if (j != last) sumNotLast += std::abs(f.c(j));
  }
  const double gapHi = f.A(0, last) - f.A(0, idx[idx.size() - 2]);
  const double gapLo = f.A(0, idx[1]) - f.A(0, first);
  const double Yp = std::log(sumNotLast / std::abs(f.c(last))) / gapHi + 1.0;
  const double Ym = -std::log(sumNotFirst / std::abs(f.c(first))) / gapLo - 1.0;
  const double lo = std::min(Ym, Yp) - 1.0, hi = std::max(Ym, Yp) + 1.0;

  int prev = -1, stable = 0;
  for (int N = 4096; N <= (1 << 20); N *= 2) {
    int changes = 0, lastSign = 0;
    for (int i = 0; i <= N; ++i) {
      Vec y(1);
      y << lo + (hi - lo) * i / N;
      const Vec e = f.A.transpose() * y;
      const double m = e.maxCoeff();
      double s = 0.0;
      for (int j : idx) s += f.c(j) * std::exp(e(j) - m);
      if (s == 0.0) continue;  // exact grid hits are dropped, not counted
      const int sg = s < 0.0 ? -1 : 1;
      if (lastSign != 0 && sg != lastSign) ++changes;
      lastSign = sg;
    }
    if (changes == prev) {
      if (++stable == 2) {
        out.count = changes;
        return out;
      }
    } else {
      stable = 0;
    }
    prev = changes;
  }
  out.count = prev;
  out.resolutionWarning = true;
  return out;
}

inline TopologySignature topologySignature(const ExpSum& f,
                                           const SignatureOptions& opts) {
  if (f.n() == 1) {
    const RootCount rc = univariateRootCount(f);
    TopologySignature sig;
    sig.componentCount = rc.count;
    sig.compactComponentCount = rc.count;  // points are compact
    sig.resolutionWarning = rc.resolutionWarning;
    sig.grid = 0;
    return sig;
  }
  if (f.n() != 2)
    throw UnsupportedDimension("topology signature is for one or two variables");

  std::vector<planar::Pt> pts(static_cast<size_t>(f.t()));
  for (int j = 0; j < f.t(); ++j) pts[static_cast<size_t>(j)] = {f.A(0, j), f.A(1, j)};
  std::vector<planar::Pt> poly = planar::hull2d(pts);
  double diam = 0.0;
  for (size_t i = 0; i < poly.size(); ++i)
    for (size_t j = i + 1; j < poly.size(); ++j)
      diam = std::max(diam, std::hypot(poly[i].x - poly[j].x,
                                       poly[i].y - poly[j].y));
  const double delta = opts.deltaRel * (diam > 0 ? diam : 1.0);

  TopologySignature sig;
  double W = opts.window;
  detail::ZeroScan cur = detail::scanZeroSet(f, W, opts.grid, delta, poly);
  bool stable = false;
  while (2.0 * W <= opts.windowCap) {
    const detail::ZeroScan big =
        detail::scanZeroSet(f, 2.0 * W, opts.grid, delta, poly);
    if (big.components == cur.components && big.compact == cur.compact) {
      stable = true;
      break;
    }
    W *= 2.0;
    cur = big;
  }
  if (!stable) sig.resolutionWarning = true;

  int res = opts.grid;
  const detail::ZeroScan fine =
      detail::scanZeroSet(f, W, 2 * res, delta, poly);
  if (fine.components != cur.components || fine.compact != cur.compact) {
    sig.resolutionWarning = true;
    cur = detail::scanZeroSet(f, W, 4 * res, delta, poly);
    res *= 4;
  }
  sig.componentCount = cur.components;
  sig.compactComponentCount = cur.compact;
  sig.window = W;
  sig.grid = res;
  return sig;
}

// ── chamber constancy ───────────────────────────────────────────────────────

struct ConstancyReport {
  std::vector<TopologySignature> signatures;
  bool constant = false;
};

// Samples k points in a disk around a chamber representative (staying well
// inside the chamber), lifts each to coefficients, and checks that the zero
// set signature does not move. Samples past the first also get a random
// fiber shift, which translates the zero set without changing its topology.
inline ConstancyReport chamberConstancyCheck(const Spectrum& spec,
                                             const NullBasis& basis,
                                             const SignClass& sigma,
                                             const Vec& rep, double radius,
                                             int k = 5, unsigned seed = 7,
                                             const SignatureOptions& opts = {}) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ConstancyReport out;
  for (int i = 0; i < k; ++i) {
    Vec v = rep;
    if (i > 0) {
      const double ang = 2.0 * M_PI * unit(rng);
      const double rad = radius * std::sqrt(unit(rng));
      v(0) += rad * std::cos(ang);
      v(1) += rad * std::sin(ang);
    }
    Vec c = liftToCoefficients(basis, sigma, v);
    if (i > 0) {
      Vec w(spec.n() + 1);
      for (int q = 0; q < w.size(); ++q) w(q) = 2.0 * unit(rng) - 1.0;
      for (int j = 0; j < spec.t(); ++j) {
        double shift = w(0);
        for (int q = 0; q < spec.n(); ++q) shift += w(q + 1) * spec.A(q, j);
        c(j) *= std::exp(shift);
      }
    }
    out.signatures.push_back(topologySignature(ExpSum::make(spec.A, c), opts));
  }
  out.constant = true;
  for (const TopologySignature& s : out.signatures)
    if (s != out.signatures.front()) out.constant = false;
  return out;
}

}  // namespace xic
