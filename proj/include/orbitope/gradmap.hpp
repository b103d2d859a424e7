#pragma once

// The G-gradient map on real projective space P(R^n).
//
// Normalization: mu_p(z) is the trace-form projection of z z^T - Id/n onto
// p, so that <mu_p(z), beta> is exactly the eigenvalue average
//   (l_1 |x_1|^2 + ... + l_k |x_k|^2) / (|x_1|^2 + ... + |x_k|^2).
// The induced field of beta at x is beta x - (x^T beta x) x; its flow is the
// projectivized exp(t beta) x. Under the round metric the gradient of
// mu_p^beta is twice this field.

#include "orbitope/liealg.hpp"

#include <functional>
#include <vector>

namespace orbitope {

/// Unit representative of a line in R^n, sign-normalized so that the first
/// coordinate above 1e-9 in magnitude is positive.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  explicit ProjectivePoint(const Vector& v);

  const Vector& rep() const { return rep_; }
  Eigen::Index dim() const { return rep_.size(); }

  /// sin of the angle between the two lines.
  double distance(const ProjectivePoint& other) const;

 private:
  Vector rep_;
};

/// mu_p(z) as a symmetric traceless matrix in p.
Matrix gradient_map(const ProjectivePoint& z, const CartanSplit& split);

/// Coordinates of pi_a(mu_p(z)) in a_basis: (z^T H_i z)_i.
Vector mu_a(const ProjectivePoint& z, const AbelianSlice& a);

struct BetaProfile {
  Matrix beta;
  std::vector<double> eigenvalues;  // strictly descending
  std::vector<Matrix> eigenspaces;  // orthonormal columns

  std::size_t size() const { return eigenvalues.size(); }
  const Matrix& top_space() const { return eigenspaces.front(); }
};

/// Clustered spectral profile of beta (which must lie in p).
BetaProfile beta_profile(const Matrix& beta, const CartanSplit& split, double cluster_tol = 1e-8);
/// Same, without the membership check; for symmetric beta on R^n.
BetaProfile beta_profile(const Matrix& beta, double cluster_tol = 1e-8);

/// sum_i l_i |pi_i z|^2.
double mu_beta(const ProjectivePoint& z, const BetaProfile& bp);

/// beta x - (x^T beta x) x, tangent to the sphere at x.
Vector induced_field(const Matrix& beta, const Vector& x);

/// Closed-form flow exp(t beta) x, projectivized.
ProjectivePoint flow_point(const BetaProfile& bp, double t, const ProjectivePoint& x);

struct FlowLimit {
  ProjectivePoint limit;
  int stratum = 0;  // 1-based index of the first eigenspace x reaches
};

/// lim_{t -> inf} exp(t beta) x: the normalized projection onto the first
/// eigenspace carrying more than `membership_tol` of x.
FlowLimit flow_limit(const BetaProfile& bp, const ProjectivePoint& x, double membership_tol = 1e-9);

/// {normalize(exp(xi_j) x)} with xi_j = sum_i u_ij gens_i, u uniform in
/// [-radius, radius]. Deterministic in `seed`.
std::vector<ProjectivePoint> orbit_sample(const MatrixList& gens, const ProjectivePoint& x,
                                          int count, double radius, std::uint64_t seed);

/// Uniformly distributed point of P(R^n).
ProjectivePoint random_point(Eigen::Index n, Rng& rng);

struct FlowTrace {
  std::vector<double> times;
  std::vector<ProjectivePoint> points;
  std::vector<double> values;

  bool empty() const { return times.empty(); }
  std::size_t size() const { return times.size(); }
};

using SphereField = std::function<Vector(const Vector&)>;

/// One classical RK4 step on the sphere followed by renormalization.
Vector rk4_sphere_step(const SphereField& field, const Vector& x, double h);

/// Integrates dx/dt = beta x - (x^T beta x) x with RK4 up to `t_end`,
/// recording mu_p^beta along the way.
FlowTrace integrate_beta_flow(const BetaProfile& bp, const ProjectivePoint& x0, double t_end,
                              double step = 0.01);

}  // namespace orbitope
