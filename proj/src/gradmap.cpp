#include "orbitope/gradmap.hpp"

#include <algorithm>
#include <limits>

namespace orbitope {

ProjectivePoint::ProjectivePoint(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error("gradmap", "projective point needs a finite nonzero vector");
  }
  rep_ = v / norm;
  canonicalize_sign(rep_);
}

double ProjectivePoint::distance(const ProjectivePoint& other) const {
  if (other.dim() != dim()) throw DimensionError("gradmap", "points live in different spaces");
  return std::min((rep_ - other.rep_).norm(), (rep_ + other.rep_).norm());
}

Matrix gradient_map(const ProjectivePoint& z, const CartanSplit& split) {
  const Vector& x = z.rep();
  Matrix out = Matrix::Zero(x.size(), x.size());
  for (const auto& p : split.p_basis) {
    if (p.rows() != x.size()) throw DimensionError("gradmap", "gradient_map: dimension mismatch");
    out += x.dot(p * x) * p;
  }
  return out;
}

Vector mu_a(const ProjectivePoint& z, const AbelianSlice& a) {
  const Vector& x = z.rep();
  Vector out(a.rank());
  for (int i = 0; i < a.rank(); ++i) out(i) = x.dot(a.a_basis[static_cast<std::size_t>(i)] * x);
  return out;
}

BetaProfile beta_profile(const Matrix& beta, double cluster_tol) {
  const auto ed = sym_eigen<double>(beta, cluster_tol);
  BetaProfile bp;
  bp.beta = beta;
  bp.eigenvalues = ed.values;
  bp.eigenspaces = ed.vectors;
  return bp;
}

BetaProfile beta_profile(const Matrix& beta, const CartanSplit& split, double cluster_tol) {
  if (p_residual(split, beta) > 1e-9 * std::max(1.0, beta.norm())) {
    throw Error("gradmap", "beta_profile: beta is not in p");
  }
  return beta_profile(beta, cluster_tol);
}

double mu_beta(const ProjectivePoint& z, const BetaProfile& bp) {
  double value = 0.0;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    value += bp.eigenvalues[i] * (bp.eigenspaces[i].transpose() * z.rep()).squaredNorm();
  }
  return value;
}

Vector induced_field(const Matrix& beta, const Vector& x) {
  const Vector bx = beta * x;
  return bx - x.dot(bx) * x;
}

ProjectivePoint flow_point(const BetaProfile& bp, double t, const ProjectivePoint& x) {
  std::vector<Vector> parts;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bp.size(); ++i) {
    parts.push_back(bp.eigenspaces[i].transpose() * x.rep());
    if (parts.back().norm() > 0.0) top = std::max(top, t * bp.eigenvalues[i]);
  }
  Vector y = Vector::Zero(x.dim());
  for (std::size_t i = 0; i < bp.size(); ++i) {
    if (parts[i].norm() == 0.0) continue;
    y += std::exp(t * bp.eigenvalues[i] - top) * (bp.eigenspaces[i] * parts[i]);
  }
  return ProjectivePoint(y);
}

FlowLimit flow_limit(const BetaProfile& bp, const ProjectivePoint& x, double membership_tol) {
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const Vector part = bp.eigenspaces[i].transpose() * x.rep();
    if (part.norm() > membership_tol) {
      return {ProjectivePoint(Vector(bp.eigenspaces[i] * part)), static_cast<int>(i) + 1};
    }
  }
  throw Error("gradmap", "flow_limit: point has no component above the membership tolerance");
}

std::vector<ProjectivePoint> orbit_sample(const MatrixList& gens, const ProjectivePoint& x,
                                          int count, double radius, std::uint64_t seed) {
  std::vector<ProjectivePoint> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  Rng rng(seed);
  for (int s = 0; s < count; ++s) {
    if (gens.empty()) {
      out.push_back(x);
      continue;
    }
    Matrix xi = Matrix::Zero(x.dim(), x.dim());
    for (const auto& g : gens) xi += rng.uniform(-radius, radius) * g;
    out.emplace_back(Vector(expm<double>(xi) * x.rep()));
  }
  return out;
}

ProjectivePoint random_point(Eigen::Index n, Rng& rng) {
  for (;;) {
    const Vector v = rng.normal_vector(n);
    if (v.norm() > 1e-12) return ProjectivePoint(v);
  }
}

Vector rk4_sphere_step(const SphereField& field, const Vector& x, double h) {
  const Vector k1 = field(x);
  const Vector k2 = field((x + 0.5 * h * k1).normalized());
  const Vector k3 = field((x + 0.5 * h * k2).normalized());
  const Vector k4 = field((x + h * k3).normalized());
  return (x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).normalized();
}

FlowTrace integrate_beta_flow(const BetaProfile& bp, const ProjectivePoint& x0, double t_end,
                              double step) {
  if (!(step > 0.0)) throw Error("gradmap", "integrate_beta_flow: step must be positive");
  const SphereField field = [&](const Vector& x) { return induced_field(bp.beta, x); };
  FlowTrace trace;
  Vector x = x0.rep();
  double t = 0.0;
  trace.times.push_back(t);
  trace.points.push_back(x0);
  trace.values.push_back(mu_beta(x0, bp));
  while (t < t_end - 1e-12) {
    const double h = std::min(step, t_end - t);
    x = rk4_sphere_step(field, x, h);
    t += h;
    ProjectivePoint p(x);
    trace.times.push_back(t);
    trace.values.push_back(mu_beta(p, bp));
    trace.points.push_back(std::move(p));
  }
  return trace;
}

}  // namespace orbitope
