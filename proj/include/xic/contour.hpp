#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "xic/parametrization.hpp"
#include "xic/polyroot.hpp"

namespace xic {

// ── breakpoints ─────────────────────────────────────────────────────────────

// Direction theta in [0, pi) with (cos th, sin th) . beta_i = 0, one per row.
struct Breakpoint {
  double theta;
  int index;
};

namespace detail {

inline double wrapHalfTurn(double th) {
  th = std::fmod(th, M_PI);
  if (th < 0) th += M_PI;
  if (th >= M_PI) th -= M_PI;
  return th;
}

// Distance on the half turn circle [0, pi).
inline double halfTurnDistance(double a, double b) {
  double w = std::fmod(std::abs(a - b), M_PI);
  return std::min(w, M_PI - w);
}

}  // namespace detail

// Sorted by angle; there are exactly t of them counted with multiplicity.
// A zero basis row is reported as pyramidal degeneracy whatever the kernel
// width, before the two column requirement.
inline std::vector<Breakpoint> breakpoints(const NullBasis& basis) {
  if (basis.m() > 0)
    for (int i = 0; i < basis.t(); ++i)
      if (basis.B.row(i).norm() <= 1e-13)
        throw DegenerateNullspace(
            "zero basis row: pyramidal spectrum has no contour");
  if (basis.m() != 2) throw Error("breakpoints need a two column basis");
  std::vector<Breakpoint> out;
  out.reserve(static_cast<size_t>(basis.t()));
  for (int i = 0; i < basis.t(); ++i) {
    const double b1 = basis.B(i, 0), b2 = basis.B(i, 1);
    out.push_back({detail::wrapHalfTurn(std::atan2(b1, -b2)), i});
  }
  std::sort(out.begin(), out.end(), [](const Breakpoint& a, const Breakpoint& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.index < b.index;
  });
  return out;
}

// Sign classes realized on breakpoint intervals, in circle order starting
// from the first distinct direction. For the two parameter case these are
// exactly the classes whose contour piece is nonempty.
inline std::vector<SignClass> attainedSignClasses(const NullBasis& basis) {
  const auto bps = breakpoints(basis);
  std::vector<double> dirs;
  for (const Breakpoint& bp : bps)
    if (dirs.empty() || detail::halfTurnDistance(dirs.back(), bp.theta) > 1e-12)
      dirs.push_back(bp.theta);
  if (dirs.size() > 1 &&
      detail::halfTurnDistance(dirs.front(), dirs.back()) <= 1e-12)
    dirs.pop_back();
  std::vector<SignClass> out;
  for (size_t k = 0; k < dirs.size(); ++k) {
    const double a = dirs[k];
    const double b = (k + 1 < dirs.size()) ? dirs[k + 1] : dirs[0] + M_PI;
    const SignClass sc = orthantSign(ProjParam::angle(0.5 * (a + b)), basis);
    if (std::find(out.begin(), out.end(), sc) == out.end()) out.push_back(sc);
  }
  return out;
}

// ── cusps ───────────────────────────────────────────────────────────────────

struct CuspSet {
  std::vector<double> thetas;  // sorted, in [0, pi)
  std::vector<Vec> points;     // xi at each cusp
  // Largest relative size of the two leading coefficients of the two
  // chart-adapted cleared derivative polynomials. Both are structurally zero,
  // which is what caps the effective degree at t - 3; a nonvanishing value
  // here would mean the derivative weights were misidentified.
  double maxLeadingResidual = 0.0;
};

namespace detail {

// Cleared numerator of d(xi_k)/d(chart parameter). In the chart
// lambda = (1, s) the factor for row j is B_j1 + B_j2 s and the weight for
// row i is B_ik * B_i2; the chart lambda = (u, 1) swaps the two columns.
inline poly::Poly clearedDerivative(const NullBasis& basis, int k, bool chartFirst) {
  const int t = basis.t();
  poly::Poly acc(static_cast<size_t>(t), 0.0);
  for (int i = 0; i < t; ++i) {
    const double w =
        basis.B(i, k) * (chartFirst ? basis.B(i, 1) : basis.B(i, 0));
    poly::Poly prod{1.0};
    for (int j = 0; j < t; ++j) {
      if (j == i) continue;
      const poly::Poly lin = chartFirst
                                 ? poly::Poly{basis.B(j, 0), basis.B(j, 1)}
                                 : poly::Poly{basis.B(j, 1), basis.B(j, 0)};
      prod = poly::mul(prod, lin);
    }
    for (size_t q = 0; q < prod.size(); ++q) acc[q] += w * prod[q];
  }
  return acc;
}

inline double clearedDerivativeScale(const NullBasis& basis, int k, bool chartFirst) {
  const int t = basis.t();
  double scale = 0.0;
  for (int i = 0; i < t; ++i) {
    double term =
        std::abs(basis.B(i, k) * (chartFirst ? basis.B(i, 1) : basis.B(i, 0)));
    for (int j = 0; j < t; ++j) {
      if (j == i) continue;
      term *= std::abs(basis.B(j, 0)) + std::abs(basis.B(j, 1));
    }
    scale += term;
  }
  return scale;
}

inline std::vector<double> commonRoots(const std::vector<double>& a,
                                       const std::vector<double>& b,
                                       double tol) {
  std::vector<double> out;
  for (double x : a)
    for (double y : b)
      if (std::abs(x - y) <= tol * std::max(1.0, std::abs(x))) {
        out.push_back(0.5 * (x + y));
        break;
      }
  return out;
}

}  // namespace detail

// Common real zeros of both derivative coordinates. Each chart covers half
// of the parameter circle; the second chart also covers the direction the
// first chart pushes to infinity.
inline CuspSet findCusps(const NullBasis& basis, double tol = 1e-8) {
  if (basis.m() != 2) throw Error("cusp search needs the two parameter case");
  const int t = basis.t();

  poly::Poly c1[2], c2[2];
  for (int k = 0; k < 2; ++k) {
    c1[k] = detail::clearedDerivative(basis, k, true);
    c2[k] = detail::clearedDerivative(basis, k, false);
    const double s1 = detail::clearedDerivativeScale(basis, k, true);
    const double s2 = detail::clearedDerivativeScale(basis, k, false);
    if (poly::maxAbsCoeff(c1[k]) <= 1e-12 * s1 &&
        poly::maxAbsCoeff(c2[k]) <= 1e-12 * s2)
      throw DegenerateDerivative("derivative coordinate vanishes identically");
  }

  CuspSet out;
  for (const poly::Poly* adapted : {&c1[1], &c2[0]}) {
    const double mx = poly::maxAbsCoeff(*adapted);
    const double lead = std::max(std::abs((*adapted)[static_cast<size_t>(t - 1)]),
                                 std::abs((*adapted)[static_cast<size_t>(t - 2)]));
    out.maxLeadingResidual = std::max(out.maxLeadingResidual, lead / mx);
  }

  std::vector<double> thetas;
  {
    const auto r0 = poly::realRoots(c1[0]);
    const auto r1 = poly::realRoots(c1[1]);
    for (double s : detail::commonRoots(r1, r0, tol))
      if (std::abs(s) <= 1.0 + 1e-9)
        thetas.push_back(detail::wrapHalfTurn(std::atan2(s, 1.0)));
  }
  {
    const auto r0 = poly::realRoots(c2[0]);
    const auto r1 = poly::realRoots(c2[1]);
    for (double u : detail::commonRoots(r0, r1, tol))
      if (std::abs(u) < 1.0 - 1e-9)
        thetas.push_back(detail::wrapHalfTurn(std::atan2(1.0, u)));
  }
  std::sort(thetas.begin(), thetas.end());
  // Parallel basis rows make every term of both cleared numerators vanish at
  // their shared breakpoint direction. Those roots are clearing artifacts,
  // not cusps; the contour runs off to infinity there.
  const auto bps = breakpoints(basis);
  std::erase_if(thetas, [&](double th) {
    for (const Breakpoint& bp : bps)
      if (detail::halfTurnDistance(th, bp.theta) <= 100.0 * kHyperplaneGuard)
        return true;
    return false;
  });
  for (double th : thetas) {
    if (!out.thetas.empty() &&
        detail::halfTurnDistance(out.thetas.back(), th) <= tol)
      continue;
    if (out.thetas.size() > 1 &&
        detail::halfTurnDistance(out.thetas.front(), th) <= tol)
      continue;  // wrap duplicate near 0 and pi
    out.thetas.push_back(th);
  }
  out.points.reserve(out.thetas.size());
  for (double th : out.thetas)
    out.points.push_back(xiPoint(ProjParam::angle(th), basis));
  return out;
}

// ── Gauss normal property ───────────────────────────────────────────────────

struct GaussCheck {
  double maxResidual = 0.0;
  int samplesUsed = 0;
};

// The generating direction lambda(theta) is normal to the contour at
// xi(theta). Checked with a central finite difference; samples near
// breakpoints and cusps are excluded, where the tangent degenerates.
inline GaussCheck verifyGaussNormal(const NullBasis& basis, int samples = 1000,
                                    double step = 1e-6, double exclusion = 1e-3) {
  if (basis.m() != 2) throw Error("normal check needs the two parameter case");
  std::vector<double> avoid;
  for (const Breakpoint& bp : breakpoints(basis)) avoid.push_back(bp.theta);
  for (double th : findCusps(basis).thetas) avoid.push_back(th);

  GaussCheck out;
  const int grid = samples * 4;
  for (int i = 0; i < grid && out.samplesUsed < samples; ++i) {
    const double th = (i + 0.5) * M_PI / grid;
    bool tooClose = false;
    for (double a : avoid)
      if (detail::halfTurnDistance(th, a) < exclusion) {
        tooClose = true;
        break;
      }
    if (tooClose) continue;
    try {
      const Vec vp = xiPoint(ProjParam::angle(th + step), basis);
      const Vec vm = xiPoint(ProjParam::angle(th - step), basis);
      const Vec tang = (vp - vm) / (2.0 * step);
      const double tn = tang.norm();
      if (tn < 1e-12) continue;
      Vec lam(2);
      lam << std::cos(th), std::sin(th);
      out.maxResidual = std::max(out.maxResidual, std::abs(tang.dot(lam)) / tn);
      ++out.samplesUsed;
    } catch (const HyperplaneHit&) {
    }
  }
  return out;
}

// ── singular locus bookkeeping ──────────────────────────────────────────────

// M(lambda)_{k,l} = sum_i B_{ik} B_{il} / (lambda . beta_i). Symmetric, and
// equal to the Jacobian of xi in the lambda coordinates; entries are degree
// -1 in lambda, so M(c lambda) = M(lambda) / c.
inline Mat singularLocusMatrix(const NullBasis& basis, const Vec& lambda,
                               double guard = kHyperplaneGuard) {
  const int m = basis.m();
  if (lambda.size() != m) throw Error("parameter dimension mismatch");
  Vec dots = basis.B * lambda;
  const double ln = lambda.norm();
  for (int i = 0; i < dots.size(); ++i)
    if (std::abs(dots(i)) < guard * ln * basis.B.row(i).norm())
      throw HyperplaneHit(i);
  Mat M = Mat::Zero(m, m);
  for (int i = 0; i < basis.t(); ++i) {
    const double inv = 1.0 / dots(i);
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) M(k, l) += basis.B(i, k) * basis.B(i, l) * inv;
  }
  return M;
}

inline Mat singularLocusMatrix(const NullBasis& basis, const ProjParam& p,
                               double guard = kHyperplaneGuard) {
  return singularLocusMatrix(basis, p.lambda, guard);
}

struct DegreeCheck {
  int degreeBound = 0;
  int observedDegree = 0;  // -1 means the cleared determinant is identically 0
};

// Interpolates det M(lambda) * prod_i (lambda . beta_i)^m over the chart
// lambda = (1, s) and reports the observed degree against the bound m(t-1).
// The determinant can vanish identically (the rows of M share the left kernel
// lambda itself), in which case the observed degree is reported as -1.
inline DegreeCheck detDegreeCheck(const NullBasis& basis) {
  if (basis.m() != 2) throw Error("degree check needs the two parameter case");
  const int t = basis.t();
  const int bound = 2 * (t - 1);
  const int nodes = bound + 9;

  std::vector<double> xs, vals;
  double detRatioMax = 0.0;
  for (int j = 0; j < nodes; ++j) {
    double s = std::cos(M_PI * (j + 0.5) / nodes);
    Vec lam(2);
    for (int tries = 0; tries < 50; ++tries) {
      lam << 1.0, s;
      const Vec dots = basis.B * lam;
      double worst = 1.0;
      for (int i = 0; i < t; ++i)
        worst = std::min(worst, std::abs(dots(i)) /
                                    (lam.norm() * basis.B.row(i).norm()));
      if (worst > 1e-6) break;
      s += 1e-5;  // node collided with a breakpoint; shift off it
    }
    lam << 1.0, s;
    const Vec dots = basis.B * lam;
    double det = 0.0;
    {
      double m00 = 0, m01 = 0, m11 = 0;
      for (int i = 0; i < t; ++i) {
        const double inv = 1.0 / dots(i);
        m00 += basis.B(i, 0) * basis.B(i, 0) * inv;
        m01 += basis.B(i, 0) * basis.B(i, 1) * inv;
        m11 += basis.B(i, 1) * basis.B(i, 1) * inv;
      }
      det = m00 * m11 - m01 * m01;
      // Scale against the largest entry, not the products: single entries
      // vanish structurally at some nodes (column sums of B are zero), which
      // would collapse a product based scale to roundoff.
      const double entry = std::max({std::abs(m00), std::abs(m01), std::abs(m11)});
      detRatioMax = std::max(detRatioMax, std::abs(det) / (entry * entry + 1e-300));
    }
    double clear = 1.0;
    for (int i = 0; i < t; ++i) clear *= dots(i) * dots(i);
    xs.push_back(s);
    vals.push_back(det * clear);
  }

  if (detRatioMax <= 1e-10) return {bound, -1};

  Mat V(nodes, bound + 1);
  for (int j = 0; j < nodes; ++j) {
    double p = 1.0;
    for (int k = 0; k <= bound; ++k) {
      V(j, k) = p;
      p *= xs[static_cast<size_t>(j)];
    }
  }
  Vec rhs = Eigen::Map<Vec>(vals.data(), nodes);
  Vec coef = V.colPivHouseholderQr().solve(rhs);
  const double cmax = coef.cwiseAbs().maxCoeff();
  for (int j = 0; j < nodes; ++j) {
    double fit = 0.0, p = 1.0, scale = 0.0;
    for (int k = 0; k <= bound; ++k) {
      fit += coef(k) * p;
      scale += std::abs(coef(k) * p);
      p *= xs[static_cast<size_t>(j)];
    }
    if (std::abs(fit - vals[static_cast<size_t>(j)]) > 1e-6 * (scale + 1e-300))
      throw InterpolationFailure("determinant samples are not polynomial");
  }
  int observed = -1;
  for (int k = 0; k <= bound; ++k)
    if (std::abs(coef(k)) > 1e-8 * cmax) observed = k;
  return {bound, observed};
}

// Component count bound (t-d-1)(t-1) (2(t-d-1)(t-1) - 1)^(2t-d-2), evaluated
// for reporting. Grows fast; returned as a double.
inline double componentBound(int t, int d) {
  const double base = static_cast<double>(t - d - 1) * (t - 1);
  return base * std::pow(2.0 * base - 1.0, 2 * t - d - 2);
}

// ── tracing ─────────────────────────────────────────────────────────────────

struct Sampling {
  int pointsPerArc = 1200;       // initial uniform samples per sub-interval
  double clipWindow = 8.0;       // arcs are reported inside [-W, W]^2
  int maxPointsPerArc = 100000;  // refinement budget
};

struct ContourArc {
  double thetaA = 0.0, thetaB = 0.0;  // parameter range covered by this run
  SignClass sigma;
  std::vector<double> thetas;
  std::vector<Vec> polyline;
  bool cuspAtStart = false, cuspAtEnd = false;
};

namespace detail {

// Rotation about a base direction: lambda(base + e) = cos(e) L + sin(e) L'.
// Rows whose breakpoint coincides with the base get their constant term
// pinned to exactly zero, so log|dot| stays accurate down to e ~ 1e-300;
// the naive formula loses the cancellation at machine epsilon distances.
struct TailEval {
  Vec c, d;
  const NullBasis* basis;

  TailEval(const NullBasis& b, double base, const std::vector<int>& pinnedRows)
      : basis(&b) {
    Vec L(2), Lp(2);
    L << std::cos(base), std::sin(base);
    Lp << -std::sin(base), std::cos(base);
    c = b.B * L;
    d = b.B * Lp;
    for (int i : pinnedRows) c(i) = 0.0;
  }

  // side +1 evaluates base + eps, side -1 evaluates base - eps
  Vec xiAt(double eps, int side) const {
    const Vec dots = std::cos(eps) * c + side * std::sin(eps) * d;
    Vec logs(dots.size());
    for (int i = 0; i < dots.size(); ++i) logs(i) = std::log(std::abs(dots(i)));
    return basis->B.transpose() * logs;
  }
};

inline Vec xiPlain(const NullBasis& basis, double th) {
  Vec lam(2);
  lam << std::cos(th), std::sin(th);
  Vec dots = basis.B * lam;
  Vec logs(dots.size());
  for (int i = 0; i < dots.size(); ++i) logs(i) = std::log(std::abs(dots(i)));
  return basis.B.transpose() * logs;
}

struct SampleSeq {
  std::vector<double> thetas;
  std::vector<Vec> points;
  void add(double th, Vec v) {
    thetas.push_back(th);
    points.push_back(std::move(v));
  }
};

inline bool segmentNearWindow(const Vec& a, const Vec& b, double W) {
  const double lim = 1.05 * W;
  if (std::min(a(0), b(0)) > lim || std::max(a(0), b(0)) < -lim) return false;
  if (std::min(a(1), b(1)) > lim || std::max(a(1), b(1)) < -lim) return false;
  return true;
}

inline void refineSegment(const NullBasis& basis, double th1, const Vec& v1,
                          double th2, const Vec& v2, double maxStep,
                          double flatTol, double W, int depth, int budget,
                          SampleSeq& out) {
  if (depth <= 0 || static_cast<int>(out.points.size()) >= budget) return;
  if (!segmentNearWindow(v1, v2, W)) return;
  const double thm = 0.5 * (th1 + th2);
  const Vec vm = xiPlain(basis, thm);
  const double step = (v2 - v1).norm();
  const double flat = (vm - 0.5 * (v1 + v2)).norm();
  if (step <= maxStep && flat <= flatTol) return;
  refineSegment(basis, th1, v1, thm, vm, maxStep, flatTol, W, depth - 1, budget, out);
  out.add(thm, vm);
  refineSegment(basis, thm, vm, th2, v2, maxStep, flatTol, W, depth - 1, budget, out);
}

// Outward walk along an asymptotic tail: eps shrinks geometrically from eps0
// until the image leaves the enlarged window. The image grows like |log eps|
// times the pinned row norm, which on weak rows exhausts the double
// resolution of base + eps before the exit; past that point the true curve
// is a straight ray to machine precision (the unpinned logs have converged),
// so the exit is sealed with one extrapolated point at the base angle itself.
inline SampleSeq tailSamples(const TailEval& ev, double base, double eps0,
                             int side, double W) {
  SampleSeq out;
  const double tauTop = std::log(eps0);
  const double dTau = -1.4;
  double reach = 0.0;
  for (double tau = tauTop; tau > -705.0; tau += dTau) {
    const double eps = std::exp(tau);
    const double th = base + side * eps;
    // th collapsing onto base or onto the previous sample exhausts the
    // parameter resolution; base itself is reserved for the closing point
    if (th == base || (!out.thetas.empty() && th == out.thetas.back())) break;
    Vec v = ev.xiAt(eps, side);
    reach = v.cwiseAbs().maxCoeff();
    out.add(th, std::move(v));
    if (reach > 1.4 * W) return out;  // one point beyond the window seals the exit
  }
  const size_t n = out.points.size();
  if (n >= 2) {
    const Vec d = out.points[n - 1] - out.points[n - 2];
    const double dn = d.cwiseAbs().maxCoeff();
    if (dn > 0.0) out.add(base, Vec(out.points[n - 1] + (2.9 * W / dn) * d));
  }
  return out;
}

// Liang-Barsky style clip of the sampled polyline to [-W, W]^2, splitting at
// exits so every stored point is inside the window. Crossing points get a
// linearly interpolated parameter.
inline std::vector<ContourArc> clipToWindow(const SampleSeq& seq, double W,
                                            const SignClass& sigma,
                                            bool cuspLo, bool cuspHi) {
  std::vector<ContourArc> runs;
  ContourArc cur;
  cur.sigma = sigma;
  bool prevEndedInside = false;

  auto flush = [&]() {
    if (cur.polyline.size() >= 2) {
      cur.thetaA = cur.thetas.front();
      cur.thetaB = cur.thetas.back();
      runs.push_back(cur);
    }
    cur.thetas.clear();
    cur.polyline.clear();
    cur.cuspAtStart = cur.cuspAtEnd = false;
  };

  // Asymptotic closing segments can span less than one ulp in theta, so a
  // clip parameter may round onto its predecessor. The point is kept and its
  // parameter bumped one ulp: geometry wins over the exact label.
  auto push = [&](double th, Vec v) {
    if (!cur.thetas.empty() && th <= cur.thetas.back())
      th = std::nextafter(cur.thetas.back(),
                          std::numeric_limits<double>::infinity());
    cur.thetas.push_back(th);
    cur.polyline.push_back(std::move(v));
  };

  const size_t N = seq.points.size();
  for (size_t i = 0; i + 1 < N; ++i) {
    const Vec &a = seq.points[i], &b = seq.points[i + 1];
    const double tha = seq.thetas[i], thb = seq.thetas[i + 1];
    double t0 = 0.0, t1 = 1.0;
    bool reject = false;
    for (int axis = 0; axis < 2 && !reject; ++axis) {
      const double p = b(axis) - a(axis);
      for (int sideOf = 0; sideOf < 2; ++sideOf) {
        const double q = sideOf ? (W - a(axis)) : (a(axis) + W);
        const double dir = sideOf ? p : -p;
        if (dir == 0.0) {
          if (q < 0) {
            reject = true;
            break;
          }
        } else {
          const double r = q / dir;
          if (dir < 0) {
            if (r > t1) {
              reject = true;
              break;
            }
            if (r > t0) t0 = r;
          } else {
            if (r < t0) {
              reject = true;
              break;
            }
            if (r < t1) t1 = r;
          }
        }
      }
    }
    if (reject || t0 > t1) {
      if (prevEndedInside) flush();
      prevEndedInside = false;
      continue;
    }
    const auto lerpV = [&](double u) { return Vec(a + u * (b - a)); };
    const auto lerpT = [&](double u) { return tha + u * (thb - tha); };
    if (!prevEndedInside) {
      flush();
      push(lerpT(t0), lerpV(t0));
      if (cuspLo && i == 0 && t0 == 0.0) cur.cuspAtStart = true;
    }
    push(lerpT(t1), lerpV(t1));
    if (t1 < 1.0) {
      flush();
      prevEndedInside = false;
    } else {
      prevEndedInside = true;
      if (cuspHi && i + 2 == N) cur.cuspAtEnd = true;
    }
  }
  flush();
  return runs;
}

}  // namespace detail

// Traces the arcs of the signed contour piece for sign class sigma, clipped
// to [-W, W]^2. The parameter circle is cut at the distinct breakpoint
// directions; each interval whose interior sign class matches sigma is traced
// with asymptotic tails at both ends and split at interior cusps (the shared
// cusp point is stored exactly in both adjacent runs).
inline std::vector<ContourArc> traceSignedContour(const NullBasis& basis,
                                                  const SignClass& sigma,
                                                  const Sampling& smp = {}) {
  if (basis.m() != 2) throw Error("tracing needs the two parameter case");
  if (sigma.size() != basis.t())
    throw Error("sign class length does not match the basis");
  const double W = smp.clipWindow;
  const double maxStep = 0.01 * (2.0 * std::sqrt(2.0) * W);
  const double flatTol = 0.25 * maxStep;

  const auto bps = breakpoints(basis);
  std::vector<double> dirs;                 // distinct breakpoint directions
  std::vector<std::vector<int>> dirRows;    // rows vanishing at each direction
  for (const Breakpoint& bp : bps) {
    if (!dirs.empty() && detail::halfTurnDistance(dirs.back(), bp.theta) <= 1e-12) {
      dirRows.back().push_back(bp.index);
    } else if (dirs.size() > 1 &&
               detail::halfTurnDistance(dirs.front(), bp.theta) <= 1e-12) {
      dirRows.front().push_back(bp.index);
    } else {
      dirs.push_back(bp.theta);
      dirRows.push_back({bp.index});
    }
  }
  const auto cusps = findCusps(basis);

  std::vector<ContourArc> arcs;
  const size_t D = dirs.size();
  for (size_t k = 0; k < D; ++k) {
    const double thA = dirs[k];
    const double thB = (k + 1 < D) ? dirs[k + 1] : dirs[0] + M_PI;
    const double span = thB - thA;
    const SignClass sc =
        orthantSign(ProjParam::angle(0.5 * (thA + thB)), basis);
    if (!(sc == sigma)) continue;

    // interior cusp split points, lifted into (thA, thB)
    std::vector<double> cuts;
    for (double c : cusps.thetas) {
      double cc = c;
      while (cc < thA + 1e-9) cc += M_PI;
      if (cc < thB - 1e-9) cuts.push_back(cc);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> bounds{thA};
    bounds.insert(bounds.end(), cuts.begin(), cuts.end());
    bounds.push_back(thB);

    for (size_t q = 0; q + 1 < bounds.size(); ++q) {
      const double lo = bounds[q], hi = bounds[q + 1];
      const bool tailLo = (q == 0), tailHi = (q + 2 == bounds.size());
      const double sub = hi - lo;
      const double epsLo = tailLo ? std::min(1e-4, 0.05 * sub) : 0.0;
      const double epsHi = tailHi ? std::min(1e-4, 0.05 * sub) : 0.0;

      detail::SampleSeq seq;
      if (tailLo) {
        // tail walks outward (theta descending); reverse into ascending order
        detail::SampleSeq tail =
            detail::tailSamples(detail::TailEval(basis, lo, dirRows[k]), lo,
                                epsLo, +1, W);
        for (size_t i = tail.points.size(); i-- > 0;)
          seq.add(tail.thetas[i], std::move(tail.points[i]));
      }

      // uniform base grid over the middle zone, refined adaptively; the
      // grid endpoint coincides with the tail junction (or the exact cusp
      // split angle, shared bitwise with the neighbouring sub-interval)
      const double a = lo + epsLo, b = hi - epsHi;
      const int N0 = std::max(33, static_cast<int>(smp.pointsPerArc * sub / span));
      std::vector<double> grid(static_cast<size_t>(N0));
      for (int i = 0; i < N0; ++i)
        grid[static_cast<size_t>(i)] = a + (b - a) * i / (N0 - 1);
      grid.front() = a;
      grid.back() = b;
      Vec prev;
      if (!seq.points.empty()) {
        prev = seq.points.back();
      } else {
        prev = detail::xiPlain(basis, grid[0]);
        seq.add(grid[0], prev);
      }
      for (int i = 1; i < N0; ++i) {
        Vec next = detail::xiPlain(basis, grid[static_cast<size_t>(i)]);
        detail::refineSegment(basis, grid[static_cast<size_t>(i - 1)], prev,
                              grid[static_cast<size_t>(i)], next, maxStep,
                              flatTol, W, 26, smp.maxPointsPerArc, seq);
        seq.add(grid[static_cast<size_t>(i)], next);
        prev = std::move(next);
      }

      if (tailHi) {
        const size_t kn = (k + 1 < D) ? k + 1 : 0;
        detail::SampleSeq tail = detail::tailSamples(
            detail::TailEval(basis, hi, dirRows[kn]), hi, epsHi, -1, W);
        for (size_t i = 1; i < tail.points.size(); ++i)
          seq.add(tail.thetas[i], std::move(tail.points[i]));
      }

      auto runs = detail::clipToWindow(seq, W, sigma, !tailLo, !tailHi);
      for (auto& r : runs) arcs.push_back(std::move(r));
    }
  }
  return arcs;
}

}  // namespace xic
