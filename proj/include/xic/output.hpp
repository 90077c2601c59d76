#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "xic/chambers.hpp"
#include "xic/completion.hpp"

namespace xic {

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmtShort(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

// One CSV per sign class: sampled arc points with their parameter, then the
// window chords of the admissible facet lines. Lines carry no parameter, so
// that field is left empty on their rows.
inline void writeContourCsv(std::ostream& out, const CompletedContour& cc,
                            double W) {
  out << "theta,v1,v2,layer\n";
  for (size_t i = 0; i < cc.arcs.size(); ++i) {
    const ContourArc& arc = cc.arcs[i];
    for (size_t q = 0; q < arc.polyline.size(); ++q)
      out << detail::fmt(arc.thetas[q]) << ',' << detail::fmt(arc.polyline[q](0))
          << ',' << detail::fmt(arc.polyline[q](1)) << ",arc" << i << '\n';
  }
  int li = 0;
  for (const FacetLine& ln : cc.lines) {
    if (!ln.admissible) continue;
    const auto chords = contourPolylines({cc.sigma, {}, {ln}}, W, true);
    for (const planar::Polyline& pl : chords)
      for (size_t q = 0; q + 1 < pl.size(); ++q) {
        double t0, t1;
        if (!planar::clipSegment(pl[q], pl[q + 1], W, t0, t1)) continue;
        const auto lerp = [&](double t) {
          return planar::Pt{pl[q].x + t * (pl[q + 1].x - pl[q].x),
                            pl[q].y + t * (pl[q + 1].y - pl[q].y)};
        };
        for (double t : {t0, t1}) {
          const planar::Pt p = lerp(t);
          out << ',' << detail::fmt(p.x) << ',' << detail::fmt(p.y)
              << ",completion" << li << '\n';
        }
      }
    ++li;
  }
}

// Single SVG with one group per layer; the y axis is flipped so the picture
// matches the mathematical orientation.
inline void writeContourSvg(std::ostream& out, const CompletedContour& cc,
                            const CuspSet& cusps, double W) {
  const double sw = W / 400.0;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
      << "viewBox=\"" << -W << ' ' << -W << ' ' << 2 * W << ' ' << 2 * W
      << "\">\n"
      << "<g transform=\"scale(1,-1)\">\n";
  out << "<rect x=\"" << -W << "\" y=\"" << -W << "\" width=\"" << 2 * W
      << "\" height=\"" << 2 * W << "\" fill=\"white\" stroke=\"black\" "
      << "stroke-width=\"" << sw << "\"/>\n";

  out << "<g id=\"arcs\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\""
      << sw * 2 << "\">\n";
  for (const ContourArc& arc : cc.arcs) {
    if (arc.polyline.size() < 2) continue;
    out << "<polyline points=\"";
    for (const Vec& v : arc.polyline)
      out << detail::fmtShort(v(0)) << ',' << detail::fmtShort(v(1)) << ' ';
    out << "\"/>\n";
  }
  out << "</g>\n";

  out << "<g id=\"completion\" fill=\"none\" stroke=\"#b0213f\" "
      << "stroke-width=\"" << sw * 2 << "\" stroke-dasharray=\"" << 8 * sw
      << ' ' << 5 * sw << "\">\n";
  {
    CompletedContour linesOnly{cc.sigma, {}, cc.lines};
    for (const planar::Polyline& pl : contourPolylines(linesOnly, W, true)) {
      double t0, t1;
      if (pl.size() < 2 || !planar::clipSegment(pl[0], pl[1], W, t0, t1))
        continue;
      const auto lerp = [&](double t) {
        return planar::Pt{pl[0].x + t * (pl[1].x - pl[0].x),
                          pl[0].y + t * (pl[1].y - pl[0].y)};
      };
      const planar::Pt a = lerp(t0), b = lerp(t1);
      out << "<line x1=\"" << detail::fmtShort(a.x) << "\" y1=\""
          << detail::fmtShort(a.y) << "\" x2=\"" << detail::fmtShort(b.x)
          << "\" y2=\"" << detail::fmtShort(b.y) << "\"/>\n";
    }
  }
  out << "</g>\n";

  out << "<g id=\"cusps\" fill=\"#2a7a2a\" stroke=\"none\">\n";
  for (const Vec& p : cusps.points)
    out << "<circle cx=\"" << detail::fmtShort(p(0)) << "\" cy=\""
        << detail::fmtShort(p(1)) << "\" r=\"" << 3 * sw << "\"/>\n";
  out << "</g>\n";

  // origin marker: a small x
  const double m = 5 * sw;
  out << "<g id=\"origin\" stroke=\"black\" stroke-width=\"" << sw << "\">\n"
      << "<line x1=\"" << -m << "\" y1=\"" << -m << "\" x2=\"" << m
      << "\" y2=\"" << m << "\"/>\n"
      << "<line x1=\"" << -m << "\" y1=\"" << m << "\" x2=\"" << m
      << "\" y2=\"" << -m << "\"/>\n"
      << "</g>\n";
  out << "</g>\n</svg>\n";
}

// nlohmann objects keep keys sorted, and nothing time dependent is written,
// so serializing the same report twice gives identical bytes.
inline void writeJsonFile(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace xic
