#pragma once

#include <stdexcept>
#include <string>

namespace xic {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The lifted matrix has a trivial right nullspace, so there is no reduced
// coefficient space to work in.
struct DegenerateNullspace : Error {
  using Error::Error;
};

// The parameter landed on (or within the guard band of) a hyperplane
// lambda . beta_i = 0. Contour arcs are open there.
struct HyperplaneHit : Error {
  int index;
  explicit HyperplaneHit(int i)
      : Error("parameter lies on hyperplane " + std::to_string(i)), index(i) {}
};

struct NotACircuit : Error {
  using Error::Error;
};

struct PyramidalCircuit : Error {
  using Error::Error;
};

struct UnsupportedDimension : Error {
  using Error::Error;
};

struct DegenerateDerivative : Error {
  using Error::Error;
};

struct InterpolationFailure : Error {
  using Error::Error;
};

struct InconsistentLift : Error {
  using Error::Error;
};

// Doubling the clip window changed the region count; the caller must enlarge.
struct WindowTooSmall : Error {
  using Error::Error;
};

// The two independent region counters disagree. Never swallowed.
struct DualCountMismatch : Error {
  using Error::Error;
};

// Two samples from one chamber produced different topology signatures.
struct ConstancyViolation : Error {
  using Error::Error;
};

struct ConfigError : Error {
  int line;
  ConfigError(int ln, const std::string& msg)
      : Error("config line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

}  // namespace xic
