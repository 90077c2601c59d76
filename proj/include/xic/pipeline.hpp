#pragma once

#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "xic/chambers.hpp"
#include "xic/config.hpp"
#include "xic/output.hpp"
#include "xic/zeroset.hpp"

namespace xic {

struct CaseContext {
  JobConfig cfg;
  Spectrum spec;
  NullBasis basis;
};

inline CaseContext makeContext(JobConfig cfg) {
  Spectrum spec = cfg.spectrum();
  NullBasis basis = nullspaceBasis(buildLifted(spec));
  return {std::move(cfg), std::move(spec), std::move(basis)};
}

// Sign classes a command works through: the explicit list, every canonical
// class, or (default) the attained ones.
inline std::vector<SignClass> requestedSignClasses(const CaseContext& cx) {
  if (cx.cfg.signsAll) return allSignClasses(cx.spec.t());
  if (!cx.cfg.signs.empty()) return cx.cfg.signs;
  return attainedSignClasses(cx.basis);
}

namespace detail {

inline void parallelFor(int jobs, int workers,
                        const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, jobs));
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < jobs; i = next++) fn(i);
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
      }
    });
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

// Timestamped sidecar so the payload files can stay byte reproducible.
inline void writeRunMeta(const std::filesystem::path& dir,
                         const std::string& command) {
  std::ofstream out(dir / "run.meta");
  const std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out << "command " << command << "\nfinished " << buf << '\n';
}

inline Sampling samplingFor(const JobConfig& cfg, double window) {
  Sampling s;
  s.pointsPerArc = cfg.pointsPerArc;
  s.clipWindow = window;
  return s;
}

// countChambers with the window enlargement retry: a certified-too-small
// window doubles up to three times before the failure propagates.
inline ChamberCount countWithRetry(const CaseContext& cx, const SignClass& sigma,
                                   double window, double& windowUsed) {
  const ContourGenerator gen = [&](double W) {
    return completedSignedContour(cx.spec, cx.basis, sigma,
                                  samplingFor(cx.cfg, W));
  };
  for (int attempt = 0;; ++attempt) {
    try {
      windowUsed = window;
      return countChambers(gen, window);
    } catch (const WindowTooSmall&) {
      if (attempt >= 3) throw;
      window *= 2.0;
    }
  }
}

}  // namespace detail

// ── contour command ─────────────────────────────────────────────────────────

// One CSV per requested sign class plus a combined SVG of all attained arcs,
// candidate lines, and cusps.
inline void runContourCommand(const JobConfig& cfg, const std::string& outDir,
                              int workers) {
  const CaseContext cx = makeContext(cfg);
  const auto signs = requestedSignClasses(cx);
  const std::filesystem::path dir =
      std::filesystem::path(outDir) / cfg.caseName;
  std::filesystem::create_directories(dir);

  std::vector<CompletedContour> results(signs.size());
  detail::parallelFor(static_cast<int>(signs.size()), workers, [&](int i) {
    results[static_cast<size_t>(i)] =
        completedSignedContour(cx.spec, cx.basis, signs[static_cast<size_t>(i)],
                               detail::samplingFor(cfg, cfg.window));
  });

  for (size_t i = 0; i < signs.size(); ++i) {
    std::ofstream csv(dir / (signs[i].str() + ".csv"), std::ios::binary);
    writeContourCsv(csv, results[i], cfg.window);
  }

  // combined picture: every arc, every candidate line, all cusps
  CompletedContour all;
  for (const CompletedContour& cc : results) {
    all.arcs.insert(all.arcs.end(), cc.arcs.begin(), cc.arcs.end());
    if (all.lines.empty()) {
      all.lines = cc.lines;
      for (FacetLine& ln : all.lines) ln.admissible = true;
    }
  }
  const CuspSet cusps = findCusps(cx.basis);
  std::ofstream svg(dir / "contour.svg", std::ios::binary);
  writeContourSvg(svg, all, cusps, cfg.window);
  detail::writeRunMeta(dir, "contour");
}

// ── chambers command ────────────────────────────────────────────────────────

inline nlohmann::json chambersReport(const JobConfig& cfg, int workers) {
  const CaseContext cx = makeContext(cfg);
  auto signs = requestedSignClasses(cx);
  std::sort(signs.begin(), signs.end());
  const auto attained = attainedSignClasses(cx.basis);
  const SpectrumReport srep = analyzeSpectrum(cx.spec);

  struct Row {
    ChamberCount count;
    double windowUsed = 0.0;
    bool attained = false;
    SubArcReport subArcs;
  };
  std::vector<Row> rows(signs.size());
  detail::parallelFor(static_cast<int>(signs.size()), workers, [&](int i) {
    Row& row = rows[static_cast<size_t>(i)];
    const SignClass& sc = signs[static_cast<size_t>(i)];
    row.attained =
        std::find(attained.begin(), attained.end(), sc) != attained.end();
    row.count = detail::countWithRetry(cx, sc, cfg.window, row.windowUsed);
    const CompletedContour cc = completedSignedContour(
        cx.spec, cx.basis, sc, detail::samplingFor(cfg, row.windowUsed));
    row.subArcs = hypothesisCheck(cc.arcs, row.windowUsed);
  });

  nlohmann::json classes = nlohmann::json::array();
  std::vector<int> observed;
  for (size_t i = 0; i < signs.size(); ++i) {
    const Row& row = rows[i];
    nlohmann::json chambers = nlohmann::json::array();
    for (const Chamber& ch : row.count.chambers) {
      nlohmann::json c{{"rep", {ch.rep.x, ch.rep.y}},
                       {"bounded", ch.bounded},
                       {"clearance", ch.clearance}};
      if (cx.spec.n() == 2) {
        Vec rep(2);
        rep << ch.rep.x, ch.rep.y;
        const ExpSum f = ExpSum::make(
            cx.spec.A, liftToCoefficients(cx.basis, signs[i], rep));
        SignatureOptions opts;
        opts.grid = cfg.grid;
        const TopologySignature sig = topologySignature(f, opts);
        c["signature"] = {sig.componentCount, sig.compactComponentCount};
      }
      chambers.push_back(std::move(c));
    }
    int inner = 0;
    for (const Chamber& ch : row.count.chambers)
      if (ch.bounded) ++inner;
    classes.push_back(
        {{"sign", signs[i].str()},
         {"attained", row.attained},
         {"count", row.count.count},
         {"innerChambers", inner},
         {"arrangementCount", row.count.arrangementCount},
         {"floodCount", row.count.floodCount},
         {"floodResolution", row.count.floodResolution},
         {"window", row.windowUsed},
         {"boundComparisons",
          {{"chamberBound", chamberBound(cx.spec.n())},
           {"isotopyBound", isotopyBound(cx.spec.n())},
           {"withinChamberBound", row.count.count <= chamberBound(cx.spec.n())},
           {"withinIsotopyBound", row.count.count <= isotopyBound(cx.spec.n())}}},
         {"subArcMaxCrossings", row.subArcs.maxCrossings},
         {"hypothesisViolations", row.subArcs.violations},
         {"chambers", std::move(chambers)}});
    observed.push_back(row.count.count);
  }

  const BoundComparison hyp = boundComparison(cx.spec.n(), observed);
  nlohmann::json report{
      {"case", cfg.caseName},
      {"spectrum",
       {{"n", cx.spec.n()},
        {"t", cx.spec.t()},
        {"d", srep.d},
        {"defect", srep.circuitDefect},
        {"pyramidal", srep.pyramidal},
        {"simplicial", srep.combinatoriallySimplicial}}},
      {"bounds",
       {{"steinerRegions", steinerRegions(cx.spec.t())},
        {"chamberBound", chamberBound(cx.spec.n())},
        {"isotopyBound", isotopyBound(cx.spec.n())},
        {"componentBound", componentBound(cx.spec.t(), srep.d)},
        {"cuspCurve",
         {{"intersections", cuspCurveBound(cx.spec.t() - 1).intersections},
          {"components", cuspCurveBound(cx.spec.t() - 1).components}}}}},
      {"hypothesis",
       {{"n", hyp.n},
        {"predictedBound", hyp.predictedBound},
        {"observedMax", hyp.observedMax},
        {"consistent", hyp.consistent}}},
      {"signClasses", std::move(classes)}};
  return report;
}

inline void runChambersCommand(const JobConfig& cfg, const std::string& outDir,
                               int workers) {
  const std::filesystem::path dir =
      std::filesystem::path(outDir) / cfg.caseName;
  std::filesystem::create_directories(dir);
  writeJsonFile((dir / "report.json").string(), chambersReport(cfg, workers));
  detail::writeRunMeta(dir, "chambers");
}

// ── verify command ──────────────────────────────────────────────────────────

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyResult {
  std::vector<VerifyCheck> checks;
  bool ok = true;

  void add(const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
    ok = ok && pass;
  }
};

namespace detail {

inline std::string num(double v) { return fmtShort(v); }

// Distinct crossing points of a chord with the existing curves, for the
// incremental line bound.
inline int chordCrossings(const planar::Polyline& chord,
                          const std::vector<planar::Polyline>& curves,
                          double tol) {
  std::vector<planar::Pt> hits;
  for (const planar::Polyline& c : curves)
    for (size_t i = 0; i + 1 < c.size(); ++i)
      for (size_t q = 0; q + 1 < chord.size(); ++q) {
        planar::detail::Seg s{chord[q], chord[q + 1], {}};
        planar::detail::Seg r{c[i], c[i + 1], {}};
        planar::detail::intersectPair(s, r, tol);
        for (double t : s.cuts)
          hits.push_back({s.a.x + t * (s.b.x - s.a.x),
                          s.a.y + t * (s.b.y - s.a.y)});
      }
  std::sort(hits.begin(), hits.end(), [](const planar::Pt& a, const planar::Pt& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  int distinct = 0;
  for (size_t i = 0; i < hits.size(); ++i)
    if (i == 0 || std::hypot(hits[i].x - hits[i - 1].x,
                             hits[i].y - hits[i - 1].y) > 2.0 * tol)
      ++distinct;
  return distinct;
}

}  // namespace detail

inline VerifyResult runVerifySuite(const JobConfig& cfg, int workers) {
  VerifyResult vr;
  const CaseContext cx = makeContext(cfg);
  const Mat lifted = buildLifted(cx.spec);
  const int m = cx.basis.m();

  if (m > 0) {
    const double resid = (lifted * cx.basis.B).cwiseAbs().maxCoeff();
    vr.add("basis-kernel", resid < 1e-10, "max residual " + detail::num(resid));
    const double ortho =
        (cx.basis.B.transpose() * cx.basis.B - Mat::Identity(m, m))
            .cwiseAbs()
            .maxCoeff();
    vr.add("basis-orthonormal", ortho < 1e-12, "deviation " + detail::num(ortho));
  } else {
    vr.add("basis-kernel", true, "simplex spectrum, empty kernel");
  }

  if (isPyramidal(cx.basis)) {
    vr.add("pyramidal", true, "pyramidal spectrum, contour checks skipped");
    return vr;
  }

  if (m == 1) {
    for (const CoeffSet& cs : cfg.coeffs) {
      try {
        const CircuitTestResult r = circuitMembershipTest(cs.c, cx.basis);
        vr.add("circuit-" + cs.name, true,
               std::string(r.onDiscriminant ? "on" : "off") + " the locus, residual " +
                   detail::num(r.residual) +
                   (r.signCompatible ? ", signs compatible" : ", signs incompatible"));
      } catch (const Error& e) {
        vr.add("circuit-" + cs.name, false, e.what());
      }
    }
    return vr;
  }
  if (m != 2) {
    vr.add("contour-dimension", true,
           "kernel dimension " + std::to_string(m) + ", contour checks need 2");
    return vr;
  }

  {
    const GaussCheck gc = verifyGaussNormal(cx.basis);
    vr.add("gauss-normal", gc.maxResidual < 1e-5 && gc.samplesUsed >= 1000,
           "max residual " + detail::num(gc.maxResidual) + " over " +
               std::to_string(gc.samplesUsed) + " samples");
  }

  CuspSet cusps;
  try {
    cusps = findCusps(cx.basis);
    vr.add("cusp-leading-coefficients", cusps.maxLeadingResidual < 1e-8,
           "relative residual " + detail::num(cusps.maxLeadingResidual));
    double worst = 0.0;
    for (double th : cusps.thetas) {
      const Vec lam = ProjParam::angle(th).lambda;
      const Mat M = singularLocusMatrix(cx.basis, lam);
      const Vec dots = cx.basis.B * lam;
      double scale = 0.0;
      for (int i = 0; i < cx.basis.t(); ++i)
        scale += cx.basis.B.row(i).squaredNorm() / std::abs(dots(i));
      worst = std::max(worst, M.cwiseAbs().maxCoeff() / scale);
    }
    vr.add("cusp-singular-matrix", worst < 1e-6,
           std::to_string(cusps.thetas.size()) + " cusps, worst entry " +
               detail::num(worst));
    if (cx.spec.t() == cx.spec.n() + 3)
      vr.add("cusp-cardinality",
             static_cast<int>(cusps.thetas.size()) <= cx.spec.n(),
             std::to_string(cusps.thetas.size()) + " cusps, at most " +
                 std::to_string(cx.spec.n()) + " expected");
  } catch (const Error& e) {
    vr.add("cusp-search", false, e.what());
  }

  {
    const DegreeCheck dc = detDegreeCheck(cx.basis);
    vr.add("det-degree", dc.observedDegree <= dc.degreeBound,
           "observed " + std::to_string(dc.observedDegree) + " against bound " +
               std::to_string(dc.degreeBound));
  }

  const auto signs = attainedSignClasses(cx.basis);
  std::vector<TopologySignature> allSigs;
  for (const SignClass& sc : signs) {
    double windowUsed = 0.0;
    ChamberCount count;
    try {
      count = detail::countWithRetry(cx, sc, cfg.window, windowUsed);
    } catch (const Error& e) {
      vr.add("dual-count-" + sc.str(), false, e.what());
      continue;
    }
    vr.add("dual-count-" + sc.str(),
           count.arrangementCount == count.floodCount,
           std::to_string(count.arrangementCount) + " regions both routes, window " +
               detail::num(windowUsed));

    const CompletedContour cc = completedSignedContour(
        cx.spec, cx.basis, sc, detail::samplingFor(cfg, windowUsed));
    std::vector<planar::Polyline> curves;
    for (const ContourArc& arc : cc.arcs) {
      planar::Polyline pl;
      for (const Vec& v : arc.polyline) pl.push_back({v(0), v(1)});
      if (pl.size() >= 2) curves.push_back(std::move(pl));
    }
    int admissible = 0;
    for (const FacetLine& ln : cc.lines)
      if (ln.admissible) ++admissible;
    if (admissible > 0) {
      // adding a chord can raise the count by at most its crossings plus one
      CompletedContour arcsOnly = cc;
      arcsOnly.lines.clear();
      std::vector<planar::Polyline> acc =
          contourPolylines(arcsOnly, windowUsed, true);
      int prev = planar::arrangementRegionCount(acc, windowUsed);
      bool incOk = true;
      std::string note;
      for (const FacetLine& ln : cc.lines) {
        if (!ln.admissible) continue;
        CompletedContour one = arcsOnly;
        one.lines = {ln};
        const auto chord = contourPolylines(one, windowUsed, true).back();
        const int crossings =
            detail::chordCrossings(chord, acc, 1e-6 * windowUsed);
        acc.push_back(chord);
        const int cur = planar::arrangementRegionCount(acc, windowUsed);
        if (cur - prev > crossings + 1 || cur < prev) incOk = false;
        note += "+" + std::to_string(cur - prev) + " (cap " +
                std::to_string(crossings + 1) + ") ";
        prev = cur;
      }
      vr.add("line-increment-" + sc.str(), incOk, note);
    }

    if (cx.spec.n() == 2) {
      bool allConstant = true;
      std::string note;
      for (const Chamber& ch : count.chambers) {
        Vec rep(2);
        rep << ch.rep.x, ch.rep.y;
        SignatureOptions opts;
        opts.grid = cfg.grid;
        const ConstancyReport rep2 = chamberConstancyCheck(
            cx.spec, cx.basis, sc, rep, 0.5 * ch.clearance,
            cfg.samplesPerChamber, 7, opts);
        allConstant = allConstant && rep2.constant;
        allSigs.push_back(rep2.signatures.front());
        note += "(" + std::to_string(rep2.signatures.front().componentCount) +
                "," + std::to_string(rep2.signatures.front().compactComponentCount) +
                ") ";
      }
      vr.add("chamber-constancy-" + sc.str(), allConstant, note);
    }
  }

  if (!allSigs.empty()) {
    std::vector<std::pair<int, int>> distinct;
    for (const TopologySignature& s : allSigs) {
      const std::pair<int, int> key{s.componentCount, s.compactComponentCount};
      if (std::find(distinct.begin(), distinct.end(), key) == distinct.end())
        distinct.push_back(key);
    }
    const int bound = isotopyBound(cx.spec.n());
    vr.add("signature-budget",
           static_cast<int>(distinct.size()) <= bound,
           std::to_string(distinct.size()) + " distinct signatures, bound " +
               std::to_string(bound));
  }
  (void)workers;
  return vr;
}

inline int runVerifyCommand(const JobConfig& cfg, const std::string& outDir,
                            int workers, std::ostream& log) {
  const VerifyResult vr = runVerifySuite(cfg, workers);
  for (const VerifyCheck& c : vr.checks)
    log << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail
        << '\n';
  log << (vr.ok ? "verification passed" : "verification FAILED") << '\n';
  if (!outDir.empty()) {
    const std::filesystem::path dir =
        std::filesystem::path(outDir) / cfg.caseName;
    std::filesystem::create_directories(dir);
    nlohmann::json checks = nlohmann::json::array();
    for (const VerifyCheck& c : vr.checks)
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    writeJsonFile((dir / "report.json").string(),
                  nlohmann::json{{"case", cfg.caseName},
                                 {"ok", vr.ok},
                                 {"checks", std::move(checks)}});
    detail::writeRunMeta(dir, "verify");
  }
  return vr.ok ? 0 : 1;
}

// ── bounds command ──────────────────────────────────────────────────────────

inline std::string boundsTable(const JobConfig& cfg) {
  const CaseContext cx = makeContext(cfg);
  const SpectrumReport srep = analyzeSpectrum(cx.spec);
  const int t = cx.spec.t(), n = cx.spec.n(), l = t - 1;
  std::ostringstream out;
  out << "case " << cfg.caseName << " (t=" << t << ", n=" << n
      << ", d=" << srep.d << ", defect=" << srep.circuitDefect << ")\n";
  out << "steiner regions for t lines      " << steinerRegions(t) << '\n';
  out << "cusp curve intersections (l=" << l << ")  "
      << cuspCurveBound(l).intersections << '\n';
  out << "cusp curve components (l=" << l << ")     "
      << cuspCurveBound(l).components << '\n';
  out << "chamber bound                    " << chamberBound(n) << '\n';
  out << "isotopy bound                    " << isotopyBound(n) << '\n';
  out << "component bound                  " << detail::num(componentBound(t, srep.d))
      << '\n';
  return out.str();
}

}  // namespace xic
