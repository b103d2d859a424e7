#pragma once

// The norm square nu_p = |mu_p|^2 / 2 on P(R^n), its descent flow and the
// empirical strata of limit norms.

#include "orbitope/gradmap.hpp"

#include <vector>

namespace orbitope {

/// Frobenius norm of mu_p(x).
double mu_norm(const ProjectivePoint& x, const CartanSplit& split);

/// tr(mu_p(x)^2) / 2.
double nu_p(const ProjectivePoint& x, const CartanSplit& split);

/// Induced field of mu_p(x) at x: mu x - (x^T mu x) x. The round-metric
/// gradient of nu_p is twice this vector.
Vector grad_nu_field(const ProjectivePoint& x, const CartanSplit& split);

struct NormFlowOptions {
  double step = 0.01;
  double grad_tol = 1e-9;
  double t_max = 200.0;
  bool record_trace = true;
};

struct NormFlowResult {
  FlowTrace trace;  // values are nu_p
  ProjectivePoint x_inf;
  double t_final = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
};

/// RK4 descent of nu_p along -grad_nu_field, renormalized every step.
/// Stops once |field| <= grad_tol or t >= t_max. Without trace recording
/// only the first and last states are kept.
NormFlowResult integrate_norm_flow(const ProjectivePoint& x0, const CartanSplit& split,
                                   const NormFlowOptions& options = {});

struct OrbitInfReport {
  int samples = 0;
  double base_limit_norm = 0.0;   // |mu_p| at the limit of x0
  std::vector<double> limit_norms;
  std::vector<double> sample_norms;
  double spread = 0.0;            // max |limit_norm - base_limit_norm|
  double worst_undercut = 0.0;    // max(base_limit_norm - sample_norm, 0)
  int non_converged = 0;
  bool ok = false;
};

/// Flows x0 and `g_samples` points exp(xi) x0 (xi random in span(gens),
/// entries in [-radius, radius]) and compares limit norms.
OrbitInfReport orbit_inf_check(const ProjectivePoint& x0, const CartanSplit& split, const MatrixList& gens,
                               int g_samples, std::uint64_t seed, double radius = 1.0,
                               const NormFlowOptions& options = {}, double spread_tol = 1e-5,
                               double undercut_tol = 1e-8);

struct StratumReport {
  int samples = 0;
  std::vector<double> limit_norms;
  std::vector<double> bin_edges;  // bins + 1 edges
  std::vector<int> histogram;
  double min_value = 0.0;
  double min_fraction = 0.0;
  int non_converged = 0;
};

/// Flows `n_samples` uniform random points to their limits and clusters the
/// limit norms.
StratumReport stratification_probe(const CartanSplit& split, Eigen::Index n, int n_samples, std::uint64_t seed,
                                   double cluster_tol = 1e-6, int bins = 20,
                                   const NormFlowOptions& options = {});

}  // namespace orbitope
