#include "doctest.h"

#include "orbitope/convgeo.hpp"
#include "orbitope/presets.hpp"

#include <algorithm>
#include <map>

using namespace orbitope;

namespace {

LieAlgebraRep base(const std::string& name) {
  const auto gens = base_generators(name);
  return make_algebra(static_cast<int>(gens.front().rows()), gens);
}

Matrix as_matrix(const AbelianSlice& a, const Vector& coords) { return a.element(coords); }

}  // namespace

TEST_CASE("monomial exponents are lexicographically descending") {
  const auto m = monomial_exponents(2, 2);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == std::vector<int>{2, 0});
  CHECK(m[1] == std::vector<int>{1, 1});
  CHECK(m[2] == std::vector<int>{0, 2});
  CHECK(monomial_exponents(3, 2).size() == 6);
  CHECK(monomial_exponents(4, 3).size() == 20);
}

TEST_CASE("sym_power_rep with k = 1 returns the same generators") {
  const auto sl2 = base("sl2");
  const auto r = sym_power_rep(sl2, 1);
  REQUIRE(r.alg.generators.size() == sl2.generators.size());
  for (std::size_t i = 0; i < sl2.generators.size(); ++i) {
    CHECK(max_abs(Matrix(r.alg.generators[i] - sl2.generators[i])) <= 1e-14);
  }
  CHECK(r.trace_removed == 0.0);
}

TEST_CASE("Sym^2 of sl2 sends H to diag(2, 0, -2)") {
  const auto r = sym_power_rep(base("sl2"), 2);
  CHECK(r.alg.n == 3);
  Matrix want = Matrix::Zero(3, 3);
  want.diagonal() << 2, 0, -2;
  CHECK(max_abs(Matrix(r.alg.generators[0] - want)) <= 1e-14);
  // e: y -> x, so xy -> x^2 and y^2 -> 2xy, rescaled by sqrt(2).
  CHECK(r.alg.generators[1](0, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.alg.generators[1](1, 2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.trace_removed == 0.0);
}

TEST_CASE("Sym^2 of sl3 is six-dimensional with weights e_i + e_j") {
  const auto r = sym_power_rep(base("sl3"), 2);
  CHECK(r.alg.n == 6);
  const auto split = cartan_split(r.alg);
  const auto a = canonical_abelian(split);
  const auto rs = restricted_roots(r.alg, a);
  const auto wd = weights(r.alg, a, rs);
  CHECK(wd.weights.size() == 6);
  CHECK(wd.multiplicities() == std::vector<int>(6, 1));
}

TEST_CASE("induced representations stay compatible and homomorphic") {
  for (const auto& name : base_names()) {
    const auto b = base(name);
    for (int k : {2, 3}) {
      const auto r = sym_power_rep(b, k);
      CHECK_NOTHROW(cartan_split(r.alg));
      // Brackets map to brackets: rho([X, Y]) = [rho X, rho Y].
      for (std::size_t i = 0; i < b.generators.size(); ++i) {
        for (std::size_t j = 0; j < b.generators.size(); ++j) {
          const Matrix br = bracket(b.generators[i], b.generators[j]);
          const Vector c = project_span<double>(br, b.generators).coords;
          Matrix image = Matrix::Zero(r.alg.n, r.alg.n);
          for (Eigen::Index t = 0; t < c.size(); ++t) image += c(t) * r.alg.generators[static_cast<std::size_t>(t)];
          CHECK(max_abs(Matrix(image - bracket(r.alg.generators[i], r.alg.generators[j]))) <= 1e-10);
        }
      }
    }
  }
}

TEST_CASE("sym_power_rep respects the dimension cap") {
  CHECK_THROWS_AS(sym_power_rep(base("sl3"), 40, 512), Error);
  CHECK_THROWS_AS(sym_power_rep(base("sl3"), 0), Error);
}

TEST_CASE("weights of the sl2 standard representation") {
  const auto p = preset_pipeline("sl2-std");
  const auto wd = weights(p.alg, p.a, p.rs);
  REQUIRE(wd.weights.size() == 2);
  Matrix h = Matrix::Zero(2, 2);
  h.diagonal() << 1, -1;
  const double on_h = wd.highest().dot(p.a.coords(h));
  CHECK(on_h == doctest::Approx(1.0));
  CHECK(max_abs(Matrix(as_matrix(p.a, wd.mu_rho) - h / 2)) <= 1e-12);
  CHECK(std::abs(wd.v_rho(0) - 1.0) <= 1e-12);
  CHECK(std::abs(wd.v_rho(1)) <= 1e-12);
}

TEST_CASE("weights of the sl2 Sym^2 representation") {
  const auto p = preset_pipeline("sl2-sym2");
  const auto wd = weights(p.alg, p.a, p.rs);
  REQUIRE(wd.weights.size() == 3);
  // On the image of H = diag(1, -1) the weights are 2, 0, -2.
  const Matrix h = p.alg.generators[0];
  std::vector<double> on_h;
  for (const auto& w : wd.weights) on_h.push_back(w.dot(p.a.coords(h)));
  CHECK(on_h[0] == doctest::Approx(2.0));
  CHECK(std::abs(on_h[1]) <= 1e-12);
  CHECK(on_h[2] == doctest::Approx(-2.0));
  CHECK(wd.multiplicities() == std::vector<int>{1, 1, 1});
  CHECK(wd.highest_index == 0);
}

TEST_CASE("weights of the sl3 standard representation") {
  const auto p = preset_pipeline("sl3-std");
  const auto wd = weights(p.alg, p.a, p.rs);
  REQUIRE(wd.weights.size() == 3);
  // Oracle: the weight of e_i is (H_c(i, i))_c.
  for (int i = 0; i < 3; ++i) {
    Vector w(2);
    for (int c = 0; c < 2; ++c) w(c) = p.a.a_basis[static_cast<std::size_t>(c)](i, i);
    CHECK(std::any_of(wd.weights.begin(), wd.weights.end(), [&](const Vector& x) { return (x - w).norm() <= 1e-10; }));
  }
  // Pairwise Weyl-conjugate, and the polytope is a triangle.
  CHECK(weyl_orbit(p.w, wd.mu_rho).size() == 3);
  const auto poly = weyl_orbit_polytope(p.w, wd.mu_rho);
  CHECK(poly.vertices.size() == 3);
  CHECK(poly.facets.size() == 3);
}

TEST_CASE("weight multisets of symmetric powers match the monomial oracle") {
  for (const std::string name : {"sl2", "sl3", "sp4"}) {
    for (int k : {1, 2, 3}) {
      const auto b = base(name);
      const auto alg = k == 1 ? b : sym_power_rep(b, k).alg;
      const auto p = make_pipeline(alg);
      const auto wd = weights(p.alg, p.a, p.rs);
      // Pair each weight with rho(H_c) for the diagonal base generators H_c.
      const auto base_a = canonical_abelian(cartan_split(b));
      std::map<std::vector<long long>, int> got;
      for (std::size_t i = 0; i < wd.weights.size(); ++i) {
        std::vector<long long> key;
        for (int c = 0; c < base_a.rank(); ++c) {
          const auto idx = static_cast<std::size_t>(c);
          const Vector rep_h = p.a.coords(alg.generators[idx]);
          key.push_back(std::llround(wd.weights[i].dot(rep_h) * 1e8));
        }
        got[key] += static_cast<int>(wd.weight_spaces[i].cols());
      }
      std::map<std::vector<long long>, int> want;
      for (const auto& m : monomial_exponents(b.n, k)) {
        std::vector<long long> key;
        for (int c = 0; c < base_a.rank(); ++c) {
          const Matrix& h = b.generators[static_cast<std::size_t>(c)];
          double v = 0;
          for (int j = 0; j < b.n; ++j) v += m[static_cast<std::size_t>(j)] * h(j, j);
          key.push_back(std::llround(v * 1e8));
        }
        ++want[key];
      }
      CHECK_MESSAGE(got == want, name << " k=" << k);
    }
  }
}

TEST_CASE("highest weight of sl3 Sym^2 is 2 e_1") {
  const auto p = preset_pipeline("sl3-sym2");
  const auto wd = weights(p.alg, p.a, p.rs);
  // On rho(diag(2, -1, -1)) the weight 2 e_1 reads 4, and on rho(diag(0, 1, -1)) it reads 0.
  CHECK(wd.highest().dot(p.a.coords(p.alg.generators[0])) == doctest::Approx(4.0));
  CHECK(std::abs(wd.highest().dot(p.a.coords(p.alg.generators[1]))) <= 1e-10);
  // x1^2 is the first monomial.
  CHECK(std::abs(std::abs(wd.v_rho(0)) - 1.0) <= 1e-12);
}

TEST_CASE("highest_weight rejects ties and non-dominant maxima") {
  const auto p = preset_pipeline("sl2-std");
  Vector w(1);
  w << 0.5;
  CHECK_THROWS_AS(highest_weight({w, w}, p.rs), Error);
  try {
    highest_weight({w, w}, p.rs);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("degenerate positivity") != std::string::npos);
  }
}

TEST_CASE("weights reject a reducible representation") {
  // sl2 acting on R^2 + R^1 by block embedding.
  MatrixList gens;
  for (const auto& x : base_generators("sl2")) {
    Matrix y = Matrix::Zero(3, 3);
    y.topLeftCorner(2, 2) = x;
    gens.push_back(y);
  }
  const auto alg = make_algebra(3, gens);
  const auto p = make_pipeline(alg);
  CHECK_THROWS_AS(weights(alg, p.a, p.rs), Error);
}

TEST_CASE("weight invariants across presets") {
  Rng rng(11);
  for (const auto& info : presets()) {
    const auto p = preset_pipeline(info.name);
    const auto wd = weights(p.alg, p.a, p.rs);
    int total = 0;
    for (int m : wd.multiplicities()) total += m;
    CHECK(total == p.alg.n);
    CHECK(wd.weight_spaces[static_cast<std::size_t>(wd.highest_index)].cols() == 1);
    CHECK(std::abs(wd.v_rho.norm() - 1.0) <= 1e-12);
    for (std::size_t i = 0; i < wd.weights.size(); ++i) {
      for (int c = 0; c < p.a.rank(); ++c) {
        const Matrix& h = p.a.a_basis[static_cast<std::size_t>(c)];
        const Matrix& v = wd.weight_spaces[i];
        CHECK(max_abs(Matrix(h * v - wd.weights[i](c) * v)) <= 1e-7);
      }
    }
    for (const auto& e : p.w.elements) {
      for (const auto& w : wd.weights) {
        const Vector img = e * w;
        CHECK(std::any_of(wd.weights.begin(), wd.weights.end(), [&](const Vector& x) { return (x - img).norm() <= 1e-7; }));
      }
    }
    const auto poly = weyl_orbit_polytope(p.w, wd.mu_rho);
    for (const auto& w : wd.weights) CHECK(poly.violation(w) <= 1e-8);
    // conv(weights) = conv(W mu_rho) through support functions.
    for (int t = 0; t < 200; ++t) {
      const Vector u = rng.normal_vector(p.a.rank());
      double hw = -1e300;
      for (const auto& w : wd.weights) hw = std::max(hw, w.dot(u));
      CHECK(std::abs(hw - poly.support(u)) <= 1e-8);
    }
  }
}
