#include "orbitope/flowlab.hpp"

#include <algorithm>
#include <cmath>

namespace orbitope {

namespace {

Matrix mu_of(const Vector& x, const CartanSplit& split) {
  Matrix out = Matrix::Zero(x.size(), x.size());
  for (const auto& p : split.p_basis) out += x.dot(p * x) * p;
  return out;
}

Vector field_of(const Vector& x, const CartanSplit& split) {
  const Vector mx = mu_of(x, split) * x;
  return mx - x.dot(mx) * x;
}

double nu_of(const Vector& x, const CartanSplit& split) {
  const Matrix mu = mu_of(x, split);
  return 0.5 * trace_form(mu, mu);
}

}  // namespace

double mu_norm(const ProjectivePoint& x, const CartanSplit& split) {
  return mu_of(x.rep(), split).norm();
}

double nu_p(const ProjectivePoint& x, const CartanSplit& split) { return nu_of(x.rep(), split); }

Vector grad_nu_field(const ProjectivePoint& x, const CartanSplit& split) { return field_of(x.rep(), split); }

NormFlowResult integrate_norm_flow(const ProjectivePoint& x0, const CartanSplit& split,
                                   const NormFlowOptions& options) {
  if (!(options.step > 0.0)) throw Error("flowlab", "integrate_norm_flow: step must be positive");
  const SphereField descent = [&](const Vector& x) { return Vector(-field_of(x, split)); };
  NormFlowResult out;
  Vector x = x0.rep();
  double t = 0.0;
  double grad = field_of(x, split).norm();
  auto record = [&](const Vector& y) {
    out.trace.times.push_back(t);
    out.trace.points.emplace_back(y);
    out.trace.values.push_back(nu_of(y, split));
  };
  record(x);
  while (grad > options.grad_tol && t < options.t_max - 1e-12) {
    const double h = std::min(options.step, options.t_max - t);
    x = rk4_sphere_step(descent, x, h);
    t += h;
    grad = field_of(x, split).norm();
    if (options.record_trace) record(x);
  }
  if (!options.record_trace && t > 0.0) record(x);
  out.x_inf = ProjectivePoint(x);
  out.t_final = t;
  out.grad_norm = grad;
  out.converged = grad <= options.grad_tol;
  return out;
}

OrbitInfReport orbit_inf_check(const ProjectivePoint& x0, const CartanSplit& split, const MatrixList& gens,
                               int g_samples, std::uint64_t seed, double radius,
                               const NormFlowOptions& options, double spread_tol, double undercut_tol) {
  NormFlowOptions quiet = options;
  quiet.record_trace = false;
  OrbitInfReport report;
  report.samples = g_samples;
  const auto base = integrate_norm_flow(x0, split, quiet);
  if (!base.converged) ++report.non_converged;
  report.base_limit_norm = mu_norm(base.x_inf, split);
  for (const auto& y : orbit_sample(gens, x0, g_samples, radius, seed)) {
    const double norm_here = mu_norm(y, split);
    const auto lim = integrate_norm_flow(y, split, quiet);
    if (!lim.converged) ++report.non_converged;
    const double limit_norm = mu_norm(lim.x_inf, split);
    report.sample_norms.push_back(norm_here);
    report.limit_norms.push_back(limit_norm);
    report.spread = std::max(report.spread, std::abs(limit_norm - report.base_limit_norm));
    report.worst_undercut = std::max(report.worst_undercut, report.base_limit_norm - norm_here);
  }
  report.ok = report.spread <= spread_tol && report.worst_undercut <= undercut_tol;
  return report;
}

StratumReport stratification_probe(const CartanSplit& split, Eigen::Index n, int n_samples, std::uint64_t seed,
                                   double cluster_tol, int bins, const NormFlowOptions& options) {
  if (n_samples < 1) throw Error("flowlab", "stratification_probe: need at least one sample");
  if (bins < 1) throw Error("flowlab", "stratification_probe: need at least one bin");
  NormFlowOptions quiet = options;
  quiet.record_trace = false;
  StratumReport report;
  report.samples = n_samples;
  Rng rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    const auto lim = integrate_norm_flow(random_point(n, rng), split, quiet);
    if (!lim.converged) ++report.non_converged;
    report.limit_norms.push_back(mu_norm(lim.x_inf, split));
  }
  const auto [lo, hi] = std::minmax_element(report.limit_norms.begin(), report.limit_norms.end());
  report.min_value = *lo;
  const int near_min = static_cast<int>(std::count_if(report.limit_norms.begin(), report.limit_norms.end(),
                                                      [&](double v) { return v - report.min_value <= cluster_tol; }));
  report.min_fraction = static_cast<double>(near_min) / n_samples;

  const double width = std::max((*hi - *lo) / bins, cluster_tol);
  report.histogram.assign(static_cast<std::size_t>(bins), 0);
  for (int b = 0; b <= bins; ++b) report.bin_edges.push_back(*lo + b * width);
  for (double v : report.limit_norms) {
    const int b = std::clamp(static_cast<int>((v - *lo) / width), 0, bins - 1);
    ++report.histogram[static_cast<std::size_t>(b)];
  }
  return report;
}

}  // namespace orbitope
