#pragma once

#include <string>
#include <vector>

#include "xic/errors.hpp"

namespace xic {

// Sign vector in {+1,-1}^t modulo global negation. The canonical
// representative has +1 in the first coordinate.
struct SignClass {
  std::vector<int> s;

  static SignClass canonical(std::vector<int> raw) {
    if (raw.empty()) throw Error("empty sign class");
    int flip = 0;
    for (int v : raw) {
      if (v == 0) throw Error("sign class entries must be nonzero");
      if (flip == 0) flip = (v > 0) ? 1 : -1;
    }
    SignClass out{std::move(raw)};
    for (int& v : out.s) v = flip * ((v > 0) ? 1 : -1);
    return out;
  }

  std::string str() const {
    std::string r;
    r.reserve(s.size());
    for (int v : s) r += (v > 0) ? '+' : '-';
    return r;
  }

  static SignClass parse(const std::string& text) {
    std::vector<int> raw;
    raw.reserve(text.size());
    for (char ch : text) {
      if (ch == '+')
        raw.push_back(1);
      else if (ch == '-')
        raw.push_back(-1);
      else
        throw Error("sign class may only contain '+' and '-'");
    }
    return canonical(std::move(raw));
  }

  int size() const { return static_cast<int>(s.size()); }
  bool operator==(const SignClass& o) const { return s == o.s; }
  bool operator!=(const SignClass& o) const { return s != o.s; }
  bool operator<(const SignClass& o) const { return str() < o.str(); }
};

// All 2^(t-1) canonical classes, lexicographic with '+' before '-'.
inline std::vector<SignClass> allSignClasses(int t) {
  if (t < 1 || t > 30) throw Error("sign class enumeration out of range");
  std::vector<SignClass> out;
  const long total = 1L << (t - 1);
  out.reserve(static_cast<size_t>(total));
  for (long mask = 0; mask < total; ++mask) {
    std::vector<int> s(static_cast<size_t>(t), 1);
    for (int j = 1; j < t; ++j)
      if ((mask >> (t - 1 - j)) & 1) s[static_cast<size_t>(j)] = -1;
    out.push_back(SignClass{std::move(s)});
  }
  return out;
}

}  // namespace xic
