#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace levikit {

using cplx = std::complex<double>;

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Lexer/parser failure; carries a 1-based source position.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line(line), column(column) {}
  int line;
  int column;
};

/// Evaluation failure (division pole, singular set of a field).
class EvalError : public Error {
public:
  using Error::Error;
};

/// Numerical failure (degenerate gradient, non-convergence, bad input matrix).
class NumericError : public Error {
public:
  using Error::Error;
};

/// Default tolerances shared by the geometric and condition routines.
struct Tolerances {
  double boundary = 1e-12;       // |rho| <= boundary*(1+|grad rho|) at a boundary point
  double sign = 1e-9;            // eigenvalue sign classification, relative to spectrum scale
  double sign_floor = 1e-13;     // absolute floor for the sign tolerance
  double frame = 1e-12;          // unitarity / tangency residuals
  double pole_guard = 1e-300;    // smallest admissible |denominator| in a division node
  double degenerate_grad = 1e-10;// smallest |grad rho| for boundary projection
  int newton_max_iter = 50;
};

inline double sign_tolerance(double tau_sign, double scale, double floor_abs = 1e-13) {
  double t = tau_sign * (1.0 + scale);
  return t > floor_abs ? t : floor_abs;
}

/// SplitMix64 generator. Used everywhere randomness is needed so that
/// seeded runs are bit-reproducible across platforms and standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log argument.
  double uniform_pos() { return 1.0 - uniform(); }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (explicit, implementation-independent).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.28318530717958647692 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  cplx gaussian_complex(double sigma) { return cplx(sigma * gaussian(), sigma * gaussian()); }

  /// Deterministic substream derivation for worker-style decomposition.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0xD1B54A32D192ED03ull * (index + 1)));
    std::uint64_t s = mix.next_u64();
    return Rng(s);
  }

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Golden-section minimization of a unimodal function on [a, b].
template <typename F>
double golden_section_min(F&& f, double a, double b, int iters = 100, double eps = 0.0) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;  // 0.618...
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (eps > 0 && std::abs(b - a) < eps) break;
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace levikit
