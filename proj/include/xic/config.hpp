#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "xic/errors.hpp"
#include "xic/signclass.hpp"
#include "xic/spectrum.hpp"

namespace xic {

// One named coefficient vector from the job file.
struct CoeffSet {
  std::string name;
  Vec c;
};

struct JobConfig {
  std::string caseName;
  Mat A;
  bool signsAll = false;
  std::vector<SignClass> signs;
  double window = 8.0;
  int grid = 1024;
  int pointsPerArc = 1200;
  int samplesPerChamber = 5;
  bool nondefective = false;
  std::vector<CoeffSet> coeffs;
  std::map<std::string, double> tols;  // keys of the form tol-<name>

  Spectrum spectrum() const { return Spectrum::fromMatrix(A); }
};

namespace detail {

// number | sqrt(expr) | (expr) | -factor, combined with * and /
struct ExprParser {
  const std::string& s;
  size_t pos = 0;
  int line;

  explicit ExprParser(const std::string& text, int lineNo)
      : s(text), line(lineNo) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(line, what + " in value '" + s + "'");
  }

  double parse() {
    const double v = term();
    if (pos != s.size()) fail("trailing characters");
    return v;
  }

  double term() {
    double v = factor();
    while (pos < s.size() && (s[pos] == '*' || s[pos] == '/')) {
      const char op = s[pos++];
      const double r = factor();
      if (op == '/') {
        if (r == 0.0) fail("division by zero");
        v /= r;
      } else {
        v *= r;
      }
    }
    return v;
  }

  double factor() {
    if (pos >= s.size()) fail("unexpected end");
    if (s[pos] == '-') {
      ++pos;
      return -factor();
    }
    if (s[pos] == '(') {
      ++pos;
      const double v = term();
      if (pos >= s.size() || s[pos] != ')') fail("missing ')'");
      ++pos;
      return v;
    }
    if (s.compare(pos, 5, "sqrt(") == 0) {
      pos += 5;
      const double v = term();
      if (pos >= s.size() || s[pos] != ')') fail("missing ')'");
      ++pos;
      if (v < 0.0) fail("sqrt of a negative value");
      return std::sqrt(v);
    }
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s.substr(pos), &used);
    } catch (const std::exception&) {
      fail("expected a number");
    }
    if (used == 0) fail("expected a number");
    pos += used;
    return v;
  }
};

inline double evalNumber(const std::string& token, int line) {
  return ExprParser(token, line).parse();
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    out.push_back(tok);
  }
  return out;
}

}  // namespace detail

inline JobConfig parseConfig(std::istream& in) {
  JobConfig cfg;
  std::string raw;
  int lineNo = 0;
  bool haveSpectrum = false;
  int pendingRows = 0, rowIndex = 0;

  while (std::getline(in, raw)) {
    ++lineNo;
    const auto toks = detail::tokens(raw);
    if (toks.empty()) continue;

    if (pendingRows > 0) {
      if (static_cast<int>(toks.size()) != cfg.A.cols())
        throw ConfigError(lineNo, "matrix row needs " +
                                      std::to_string(cfg.A.cols()) + " entries");
      for (int j = 0; j < cfg.A.cols(); ++j)
        cfg.A(rowIndex, j) =
            detail::evalNumber(toks[static_cast<size_t>(j)], lineNo);
      ++rowIndex;
      --pendingRows;
      continue;
    }

    const std::string& key = toks[0];
    if (key == "case") {
      if (toks.size() != 2) throw ConfigError(lineNo, "case takes one name");
      cfg.caseName = toks[1];
    } else if (key == "spectrum") {
      if (toks.size() != 3)
        throw ConfigError(lineNo, "spectrum takes rows and columns");
      int r = 0, c = 0;
      try {
        r = std::stoi(toks[1]);
        c = std::stoi(toks[2]);
      } catch (const std::exception&) {
        throw ConfigError(lineNo, "spectrum dimensions must be integers");
      }
      if (r < 1 || c < 1) throw ConfigError(lineNo, "spectrum dimensions must be positive");
      cfg.A = Mat::Zero(r, c);
      pendingRows = r;
      rowIndex = 0;
      haveSpectrum = true;
    } else if (key == "signs") {
      if (toks.size() < 2) throw ConfigError(lineNo, "signs needs a value");
      if (toks.size() == 2 && toks[1] == "all") {
        cfg.signsAll = true;
      } else {
        for (size_t q = 1; q < toks.size(); ++q) {
          try {
            cfg.signs.push_back(SignClass::parse(toks[q]));
          } catch (const Error& e) {
            throw ConfigError(lineNo, e.what());
          }
        }
      }
    } else if (key == "coeffs") {
      if (!haveSpectrum)
        throw ConfigError(lineNo, "coeffs must follow the spectrum");
      if (static_cast<int>(toks.size()) != 2 + cfg.A.cols())
        throw ConfigError(lineNo, "coeffs needs a name and " +
                                      std::to_string(cfg.A.cols()) + " values");
      CoeffSet set;
      set.name = toks[1];
      set.c.resize(cfg.A.cols());
      for (int j = 0; j < cfg.A.cols(); ++j)
        set.c(j) = detail::evalNumber(toks[static_cast<size_t>(j) + 2], lineNo);
      cfg.coeffs.push_back(std::move(set));
    } else if (key == "window" || key == "grid" || key == "points-per-arc" ||
               key == "samples-per-chamber") {
      if (toks.size() != 2) throw ConfigError(lineNo, key + " takes one value");
      const double v = detail::evalNumber(toks[1], lineNo);
      if (key == "window") {
        if (v <= 0) throw ConfigError(lineNo, "window must be positive");
        cfg.window = v;
      } else if (v < 1 || v != std::floor(v)) {
        throw ConfigError(lineNo, key + " must be a positive integer");
      } else if (key == "grid") {
        cfg.grid = static_cast<int>(v);
      } else if (key == "points-per-arc") {
        cfg.pointsPerArc = static_cast<int>(v);
      } else {
        cfg.samplesPerChamber = static_cast<int>(v);
      }
    } else if (key == "nondefective") {
      if (toks.size() != 1)
        throw ConfigError(lineNo, "nondefective takes no value");
      cfg.nondefective = true;
    } else if (key.rfind("tol-", 0) == 0) {
      if (toks.size() != 2) throw ConfigError(lineNo, key + " takes one value");
      const double v = detail::evalNumber(toks[1], lineNo);
      if (v <= 0) throw ConfigError(lineNo, "tolerances must be positive");
      cfg.tols[key] = v;
    } else {
      throw ConfigError(lineNo, "unknown key '" + key + "'");
    }
  }
  if (pendingRows > 0)
    throw ConfigError(lineNo, "matrix block ended early");
  if (!haveSpectrum) throw ConfigError(lineNo, "missing spectrum");
  if (cfg.caseName.empty()) throw ConfigError(lineNo, "missing case name");
  for (const SignClass& sc : cfg.signs)
    if (sc.size() != cfg.A.cols())
      throw ConfigError(lineNo, "sign class length does not match the spectrum");
  for (const CoeffSet& cs : cfg.coeffs)
    if (cs.c.size() != cfg.A.cols())
      throw ConfigError(lineNo, "coefficient length does not match the spectrum");
  return cfg;
}

inline JobConfig parseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  return parseConfig(in);
}

}  // namespace xic
