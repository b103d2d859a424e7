#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace orbitope {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using MatrixList = std::vector<Matrix>;

/// Base of every error raised by the library. `module()` names the layer
/// that detected the problem (matkernel, liealg, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Fixed numerical thresholds shared by the layers. Every field can be
/// overridden from a scenario file (see cli).
struct Tolerances {
  double cluster = 1e-8;      // eigenvalue / joint-value clustering
  double membership = 1e-9;   // flow-limit eigencomponent cutoff
  double span = 1e-8;         // subspace membership residuals
  double dedup = 1e-8;        // Weyl element / orbit point identification
  double tight = 1e-9;        // facet tightness and face membership
  double orthogonal = 1e-9;   // relative pairing threshold for orthogonality
  double grad = 1e-9;         // norm-square flow stopping criterion
  double strata = 1e-6;       // limit-norm clustering in the strata probe
};

/// Deterministic, platform-independent random source. Only the raw
/// mt19937_64 stream is used, the distributions are derived here so that
/// identical seeds give identical numbers with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vector normal_vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace orbitope
