#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace xic::poly {

// Dense univariate polynomial, ascending coefficients: p[k] multiplies x^k.
using Poly = std::vector<double>;

inline double eval(const Poly& p, double x) {
  double r = 0.0;
  for (size_t k = p.size(); k-- > 0;) r = r * x + p[k];
  return r;
}

// Horner on absolute values; a local magnitude scale for zero tests.
inline double evalAbs(const Poly& p, double x) {
  const double ax = std::abs(x);
  double r = 0.0;
  for (size_t k = p.size(); k-- > 0;) r = r * ax + std::abs(p[k]);
  return r;
}

inline Poly derivative(const Poly& p) {
  if (p.size() <= 1) return Poly{0.0};
  Poly d(p.size() - 1);
  for (size_t k = 1; k < p.size(); ++k) d[k - 1] = p[k] * static_cast<double>(k);
  return d;
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline double maxAbsCoeff(const Poly& p) {
  double m = 0.0;
  for (double c : p) m = std::max(m, std::abs(c));
  return m;
}

// Drop trailing coefficients below relTol of the largest one.
inline Poly trimmed(Poly p, double relTol = 1e-13) {
  const double cut = relTol * maxAbsCoeff(p);
  while (p.size() > 1 && std::abs(p.back()) <= cut) p.pop_back();
  return p;
}

// All real roots, each found by bisection. Brackets come from the
// recursively computed critical points, so even order touch points are
// caught by the residual test at critical values. Intended for the small
// degrees this library produces (under ~15).
inline std::vector<double> realRoots(const Poly& pIn) {
  Poly p = trimmed(pIn);
  std::vector<double> roots;
  const int deg = static_cast<int>(p.size()) - 1;
  if (deg <= 0) return roots;
  if (deg == 1) {
    roots.push_back(-p[0] / p[1]);
    return roots;
  }

  double mx = 0.0;
  for (int k = 0; k < deg; ++k) mx = std::max(mx, std::abs(p[static_cast<size_t>(k)]));
  const double bound = 1.0 + mx / std::abs(p[static_cast<size_t>(deg)]);

  const std::vector<double> crit = realRoots(derivative(p));
  std::vector<double> grid;
  grid.push_back(-bound);
  for (double c : crit)
    if (c > -bound && c < bound) grid.push_back(c);
  grid.push_back(bound);
  std::sort(grid.begin(), grid.end());

  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    double a = grid[i], b = grid[i + 1];
    double fa = eval(p, a), fb = eval(p, b);
    if (fa == 0.0 || fb == 0.0) continue;  // grid points are handled below
    if ((fa < 0) == (fb < 0)) continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = eval(p, mid);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if ((fm < 0) == (fa < 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
      if (b - a <= 1e-15 * std::max({1.0, std::abs(a), std::abs(b)})) break;
    }
    roots.push_back(0.5 * (a + b));
  }

  // Touch points: a critical value that vanishes to roundoff is a root of
  // even local order and produces no sign change.
  for (double c : crit) {
    if (c <= -bound || c >= bound) continue;
    if (std::abs(eval(p, c)) <= 1e-11 * std::max(1.0, evalAbs(p, c)))
      roots.push_back(c);
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (out.empty() || r - out.back() > 1e-9 * std::max(1.0, std::abs(r)))
      out.push_back(r);
  }
  return out;
}

}  // namespace xic::poly
