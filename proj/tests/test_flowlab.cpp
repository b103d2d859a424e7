#include "doctest.h"

#include "orbitope/flowlab.hpp"
#include "orbitope/presets.hpp"

#include <numeric>

using namespace orbitope;

namespace {

bool is_eigenline(const Matrix& m, const Vector& x, double tol) {
  const Vector mx = m * x;
  return (mx - x.dot(mx) * x).norm() <= tol * std::max(1.0, m.norm());
}

}  // namespace

TEST_CASE("nu_p is constant for the sl2 standard representation") {
  const auto p = preset_pipeline("sl2-std");
  Rng rng(71);
  for (int t = 0; t < 100; ++t) {
    const auto x = random_point(2, rng);
    CHECK(std::abs(nu_p(x, p.split) - 0.25) <= 1e-12);
    // Oracle: x x^T - Id/2 has eigenvalues +-1/2.
    const Matrix mu = x.rep() * x.rep().transpose() - Matrix::Identity(2, 2) / 2;
    CHECK(max_abs(Matrix(gradient_map(x, p.split) - mu)) <= 1e-12);
    CHECK(grad_nu_field(x, p.split).norm() <= 1e-12);
  }
}

TEST_CASE("nu_p at the highest weight line of sl2 Sym^2") {
  const auto p = preset_pipeline("sl2-sym2");
  const auto wd = weights(p.alg, p.a, p.rs);
  const ProjectivePoint xo(wd.v_rho);
  CHECK(std::abs(nu_p(xo, p.split) - 0.5 * wd.mu_rho.squaredNorm()) <= 1e-12);
  // The k-component vanishes: mu_p(x_o) already lies in a.
  CHECK(max_abs(Matrix(gradient_map(xo, p.split) - p.a.element(wd.mu_rho))) <= 1e-12);
  CHECK(grad_nu_field(xo, p.split).norm() <= 1e-9);
}

TEST_CASE("nu_p is nonnegative and the field is tangent") {
  Rng rng(72);
  for (const auto& info : presets()) {
    const auto p = preset_pipeline(info.name);
    for (int t = 0; t < 50; ++t) {
      const auto x = random_point(p.alg.n, rng);
      CHECK(nu_p(x, p.split) >= 0.0);
      CHECK(std::abs(x.rep().dot(grad_nu_field(x, p.split))) <= 1e-12);
      CHECK(std::abs(mu_norm(x, p.split) - std::sqrt(2 * nu_p(x, p.split))) <= 1e-12);
    }
  }
  const auto s = preset_pipeline("sl2-sym2");
  CHECK(grad_nu_field(random_point(3, rng), s.split).norm() > 1e-6);
}

TEST_CASE("criticality agrees with the eigenline condition") {
  Rng rng(73);
  for (const std::string name : {"sl2-sym2", "sl3-sym2", "sp4-std", "sl3-adj"}) {
    const auto p = preset_pipeline(name);
    const auto wd = weights(p.alg, p.a, p.rs);
    std::vector<ProjectivePoint> pts;
    for (const auto& ws : wd.weight_spaces) pts.emplace_back(Vector(ws.col(0)));
    for (int t = 0; t < 50; ++t) pts.push_back(random_point(p.alg.n, rng));
    for (const auto& x : pts) {
      const bool critical = grad_nu_field(x, p.split).norm() <= 1e-9;
      CHECK(critical == is_eigenline(gradient_map(x, p.split), x.rep(), 1e-7));
    }
  }
}

TEST_CASE("integrate_norm_flow returns immediately at critical points") {
  const auto sl2 = preset_pipeline("sl2-std");
  Rng rng(74);
  const auto x = random_point(2, rng);
  auto r = integrate_norm_flow(x, sl2.split);
  CHECK(r.converged);
  CHECK(r.t_final == 0.0);
  CHECK(r.x_inf.distance(x) == 0.0);
  CHECK(r.trace.size() == 1);

  const auto s = preset_pipeline("sl2-sym2");
  const ProjectivePoint xo(weights(s.alg, s.a, s.rs).v_rho);
  r = integrate_norm_flow(xo, s.split);
  CHECK(r.t_final == 0.0);
  CHECK(r.x_inf.distance(xo) <= 1e-15);
}

TEST_CASE("limit norms agree across a G-orbit in sl2 Sym^2") {
  const auto p = preset_pipeline("sl2-sym2");
  Rng rng(75);
  const auto x0 = random_point(3, rng);
  std::vector<double> norms;
  for (const auto& y : orbit_sample(p.alg.generators, x0, 20, 1.0, 76)) {
    const auto r = integrate_norm_flow(y, p.split, {.record_trace = false});
    CHECK(r.converged);
    norms.push_back(mu_norm(r.x_inf, p.split));
  }
  const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
  CHECK(*hi - *lo <= 1e-6);
}

TEST_CASE("integrate_norm_flow descends and is stable at the limit") {
  Rng rng(77);
  for (const std::string name : {"sl2-sym2", "sl3-std", "sl3-sym2", "sp4-std"}) {
    const auto p = preset_pipeline(name);
    for (int t = 0; t < 5; ++t) {
      const auto r = integrate_norm_flow(random_point(p.alg.n, rng), p.split);
      for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace.values[i] <= r.trace.values[i - 1] + 1e-12);
      CHECK(r.trace.values.back() == doctest::Approx(nu_p(r.x_inf, p.split)));
      if (!r.converged) continue;
      const auto again = integrate_norm_flow(r.x_inf, p.split);
      CHECK(std::abs(mu_norm(again.x_inf, p.split) - mu_norm(r.x_inf, p.split)) <= 1e-9);
    }
  }
}

TEST_CASE("integrate_norm_flow flags non-convergence") {
  const auto p = preset_pipeline("sl2-sym2");
  Rng rng(78);
  const auto r = integrate_norm_flow(random_point(3, rng), p.split, {.step = 0.01, .grad_tol = 1e-9, .t_max = 0.05});
  CHECK_FALSE(r.converged);
  CHECK(r.t_final == doctest::Approx(0.05));
  CHECK(r.grad_norm > 1e-9);
  CHECK_THROWS_AS(integrate_norm_flow(random_point(3, rng), p.split, {.step = 0.0}), Error);
}

TEST_CASE("finite differences of nu_p match twice the field") {
  Rng rng(79);
  for (const std::string name : {"sl2-sym2", "sl3-sym2", "sp4-std"}) {
    const auto p = preset_pipeline(name);
    for (int t = 0; t < 30; ++t) {
      const Vector x = random_point(p.alg.n, rng).rep();
      Vector v = rng.normal_vector(p.alg.n);
      v -= x.dot(v) * x;
      v.normalize();
      const double h = 1e-5;
      auto curve = [&](double s) { return ProjectivePoint(Vector(std::cos(s) * x + std::sin(s) * v)); };
      const double fd = (nu_p(curve(h), p.split) - nu_p(curve(-h), p.split)) / (2 * h);
      CHECK(std::abs(fd - 2 * grad_nu_field(ProjectivePoint(x), p.split).dot(v)) <= 1e-5);
    }
  }
}

TEST_CASE("orbit_inf_check examples") {
  const auto p = preset_pipeline("sl2-sym2");
  const auto wd = weights(p.alg, p.a, p.rs);
  // The zero-weight line is the absolute minimum.
  const ProjectivePoint mid(Vector(wd.weight_spaces[1].col(0)));
  auto r = orbit_inf_check(mid, p.split, p.alg.generators, 20, 81);
  CHECK(r.base_limit_norm <= 1e-12);
  CHECK(r.worst_undercut == 0.0);
  CHECK(r.ok);

  Rng rng(82);
  r = orbit_inf_check(random_point(3, rng), p.split, p.alg.generators, 20, 83);
  CHECK(r.samples == 20);
  CHECK(r.spread <= 1e-5);
  CHECK(r.worst_undercut <= 1e-8);
  CHECK(r.ok);

  r = orbit_inf_check(random_point(3, rng), p.split, {}, 20, 84);
  CHECK(r.spread == 0.0);
  CHECK(r.ok);
}

TEST_CASE("stratification_probe examples") {
  const auto sl2 = preset_pipeline("sl2-std");
  auto r = stratification_probe(sl2.split, 2, 100, 91);
  CHECK(r.samples == 100);
  CHECK(r.min_fraction == 1.0);
  CHECK(r.min_value == doctest::Approx(std::sqrt(0.5)));
  CHECK(std::accumulate(r.histogram.begin(), r.histogram.end(), 0) == 100);

  const auto s = preset_pipeline("sl2-sym2");
  r = stratification_probe(s.split, 3, 1000, 92);
  CHECK(r.min_fraction >= 0.95);
  CHECK(r.min_value == doctest::Approx(*std::min_element(r.limit_norms.begin(), r.limit_norms.end())));
  CHECK(r.non_converged == 0);
  CHECK(std::accumulate(r.histogram.begin(), r.histogram.end(), 0) == 1000);
  CHECK(r.bin_edges.size() == r.histogram.size() + 1);
}

TEST_CASE("histograms always sum to the sample count") {
  for (const std::string name : {"sl3-std", "sl3-sym2", "sp4-std"}) {
    const auto p = preset_pipeline(name);
    const auto r = stratification_probe(p.split, p.alg.n, 100, 93);
    CHECK(std::accumulate(r.histogram.begin(), r.histogram.end(), 0) == 100);
    CHECK(r.min_fraction >= 0.0);
    CHECK(r.min_fraction <= 1.0);
  }
}
