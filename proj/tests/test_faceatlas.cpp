#include "doctest.h"

#include "orbitope/faceatlas.hpp"
#include "orbitope/presets.hpp"

#include <algorithm>
#include <set>

using namespace orbitope;

namespace {

struct Atlas {
  Pipeline p;
  WeightData wd;
  Polytope poly;
};

Atlas atlas(const std::string& name) {
  auto p = preset_pipeline(name);
  auto wd = weights(p.alg, p.a, p.rs);
  auto poly = weyl_orbit_polytope(p.w, wd.mu_rho);
  return {std::move(p), std::move(wd), std::move(poly)};
}

const MuConnectedSubset& find_subset(const std::vector<MuConnectedSubset>& all, const SimpleSubset& s) {
  for (const auto& m : all) {
    if (m.subset == s) return m;
  }
  FAIL("subset not enumerated");
  return all.front();
}

bool same_points(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const Vector& x) {
    return std::any_of(b.begin(), b.end(), [&](const Vector& y) { return (x - y).norm() <= tol; });
  });
}

// Faces of P modulo W, by acting with each Weyl matrix on vertex coordinates.
int lattice_classes_oracle(const Polytope& p, const WeylGroup& w) {
  std::set<std::vector<int>> seen;
  int classes = 0;
  for (const auto& f : face_lattice(p)) {
    if (seen.count(f.vertex_indices)) continue;
    ++classes;
    for (const auto& e : w.elements) {
      std::vector<int> img;
      for (int i : f.vertex_indices) img.push_back(find_vertex(p, e * p.vertices[static_cast<std::size_t>(i)]));
      std::sort(img.begin(), img.end());
      seen.insert(img);
    }
  }
  return classes;
}

MatrixList q_generators(const LieAlgebraRep& alg, const RestrictedRootSystem& rs, const SimpleSubset& s) {
  const auto q = parabolic_from_subset(alg, rs, s).q;
  MatrixList out;
  for (Eigen::Index c = 0; c < q.cols(); ++c) out.push_back(alg.element(q.col(c)));
  return out;
}

}  // namespace

TEST_CASE("mu_rho-connected subsets for the rank-one and rank-two presets") {
  const auto sl2 = atlas("sl2-std");
  CHECK(sl2.p.rs.simple_root(0).dot(sl2.wd.mu_rho) != doctest::Approx(0.0));
  CHECK(enumerate_mu_connected(sl2.p.rs, sl2.wd.mu_rho).size() == 2);

  const auto sl3 = atlas("sl3-std");
  // Pairing table of mu_rho with the base.
  CHECK_FALSE(orthogonal(sl3.p.rs.simple_root(0), sl3.wd.mu_rho));
  CHECK(orthogonal(sl3.p.rs.simple_root(1), sl3.wd.mu_rho));
  const auto ms = enumerate_mu_connected(sl3.p.rs, sl3.wd.mu_rho);
  REQUIRE(ms.size() == 3);
  CHECK(ms[0].subset.empty());
  CHECK(ms[1].subset == SimpleSubset{0});
  CHECK(ms[2].subset == SimpleSubset{0, 1});

  const auto adj = atlas("sl3-adj");
  CHECK_FALSE(orthogonal(adj.p.rs.simple_root(0), adj.wd.mu_rho));
  CHECK_FALSE(orthogonal(adj.p.rs.simple_root(1), adj.wd.mu_rho));
  CHECK(enumerate_mu_connected(adj.p.rs, adj.wd.mu_rho).size() == 4);
}

TEST_CASE("subset invariants across presets") {
  for (const auto& info : presets()) {
    const auto a = atlas(info.name);
    const auto& rs = a.p.rs;
    for (const auto& m : enumerate_mu_connected(rs, a.wd.mu_rho)) {
      CHECK((m.y0 + m.y1 - a.wd.mu_rho).norm() <= 1e-10);
      CHECK(std::abs(m.y0.dot(m.y1)) <= 1e-10);
      CHECK(std::includes(m.saturation.begin(), m.saturation.end(), m.subset.begin(), m.subset.end()));
      for (int j = 0; j < rs.num_simple(); ++j) {
        const bool in_i = std::count(m.subset.begin(), m.subset.end(), j) > 0;
        const bool in_j = std::count(m.saturation.begin(), m.saturation.end(), j) > 0;
        if (in_i) continue;
        bool orth = orthogonal(rs.simple_root(j), a.wd.mu_rho);
        for (int i : m.subset) orth = orth && orthogonal(rs.simple_root(j), rs.simple_root(i));
        CHECK(in_j == orth);
      }
      // Saturation is idempotent.
      CHECK(saturation(rs, a.wd.mu_rho, m.saturation) == m.saturation);
    }
  }
}

TEST_CASE("face_from_I examples") {
  const auto sl3 = atlas("sl3-std");
  const auto ms = enumerate_mu_connected(sl3.p.rs, sl3.wd.mu_rho);
  const auto vertex = face_from_I(ms[0], sl3.p.w, sl3.p.rs);
  REQUIRE(vertex.vertices.size() == 1);
  CHECK((vertex.vertices[0] - sl3.wd.mu_rho).norm() <= 1e-10);

  const auto edge = face_from_I(ms[1], sl3.p.w, sl3.p.rs);
  CHECK(edge.vertices.size() == 2);
  CHECK(edge.dim == 1);
  const Vector reflected = reflection(sl3.p.rs.simple_root(0)) * sl3.wd.mu_rho;
  CHECK(same_points(edge.vertices, {sl3.wd.mu_rho, reflected}, 1e-9));
  const auto f = match_face(sl3.poly, edge.vertices);
  REQUIRE(f.has_value());
  bool facet = false;
  for (const auto& h : sl3.poly.facets) facet = facet || (h.normal - f->supporting_normal.normalized()).norm() <= 1e-7;
  CHECK(facet);

  const auto whole = face_from_I(ms[2], sl3.p.w, sl3.p.rs);
  CHECK(polytope_equal(whole, sl3.poly));

  const auto adj = atlas("sl3-adj");
  const auto all = enumerate_mu_connected(adj.p.rs, adj.wd.mu_rho);
  CHECK(polytope_equal(face_from_I(all.back(), adj.p.w, adj.p.rs), adj.poly));
}

TEST_CASE("face_from_I rejects a non-dominant split") {
  const auto sl3 = atlas("sl3-std");
  // Outside the dominant chamber the s_1-orbit of a generic point is a
  // diagonal of the hexagon, not an edge.
  MuConnectedSubset bad;
  bad.subset = {0};
  bad.saturation = {0};
  bad.y0 = Vector::Zero(2);
  bad.y1 = reflection(sl3.p.rs.simple_root(1)) * beta_for_subset(sl3.p.rs, {});
  CHECK_THROWS_AS(face_from_I(bad, sl3.p.w, sl3.p.rs), Error);
}

TEST_CASE("casselman_correspondence examples") {
  const std::vector<std::pair<std::string, int>> cases{{"sl2-std", 2}, {"sl3-std", 3}, {"sl3-adj", 4}};
  for (const auto& [name, count] : cases) {
    const auto a = atlas(name);
    const auto rep = casselman_correspondence(a.p.rs, a.p.w, a.wd.mu_rho, a.poly);
    CHECK_MESSAGE(rep.matched, name);
    CHECK(static_cast<int>(rep.classes.size()) == count);
    CHECK(rep.lattice_classes == count);
    CHECK(lattice_classes_oracle(a.poly, a.p.w) == count);
    CHECK(rep.diff.empty());
  }
  // The adjoint hexagon: one vertex class, two edge classes, P.
  const auto adj = atlas("sl3-adj");
  const auto rep = casselman_correspondence(adj.p.rs, adj.p.w, adj.wd.mu_rho, adj.poly);
  std::vector<int> dims;
  for (const auto& c : rep.classes) dims.push_back(c.face.dim);
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{0, 1, 1, 2});
  int total = 0;
  for (const auto& c : rep.classes) total += c.orbit_size;
  CHECK(total == 13);
}

TEST_CASE("correspondence holds on every preset with non-equivalent classes") {
  for (const auto& info : presets()) {
    const auto a = atlas(info.name);
    const auto rep = casselman_correspondence(a.p.rs, a.p.w, a.wd.mu_rho, a.poly);
    CHECK_MESSAGE(rep.matched, info.name);
    CHECK(rep.lattice_classes == lattice_classes_oracle(a.poly, a.p.w));
    const auto perms = vertex_permutations(a.p.w, a.poly);
    std::set<std::vector<int>> keys;
    for (const auto& c : rep.classes) {
      CHECK(canonical_face(c.face.vertex_indices, perms) == c.representative);
      keys.insert(c.representative);
    }
    CHECK(keys.size() == rep.classes.size());
    int total = 0;
    for (const auto& c : rep.classes) total += c.orbit_size;
    CHECK(total == static_cast<int>(face_lattice(a.poly).size()));
  }
}

TEST_CASE("face extremes are W_I-orbits of mu_rho") {
  for (const auto& info : presets()) {
    const auto a = atlas(info.name);
    for (const auto& m : enumerate_mu_connected(a.p.rs, a.wd.mu_rho)) {
      const auto f = face_from_I(m, a.p.w, a.p.rs);
      const auto orbit = weyl_orbit(weyl_subgroup(a.p.rs, m.subset), a.wd.mu_rho);
      CHECK_MESSAGE(same_points(f.vertices, orbit, 1e-7), info.name);
    }
  }
}

TEST_CASE("faces grow with I") {
  for (const auto& info : presets()) {
    const auto a = atlas(info.name);
    const auto all = enumerate_mu_connected(a.p.rs, a.wd.mu_rho);
    for (const auto& small : all) {
      for (const auto& big : all) {
        if (!std::includes(big.subset.begin(), big.subset.end(), small.subset.begin(), small.subset.end())) continue;
        const auto fs = face_from_I(small, a.p.w, a.p.rs);
        const auto fb = face_from_I(big, a.p.w, a.p.rs);
        for (const auto& v : fs.vertices) CHECK(find_vertex(fb, v) >= 0);
      }
    }
  }
}

TEST_CASE("stabilizer_subalgebra examples") {
  const auto sl2 = preset_pipeline("sl2-std");
  CHECK(stabilizer_subalgebra(sl2.alg, Matrix::Identity(2, 2)).size() == 3);
  const auto b = stabilizer_subalgebra(sl2.alg, Matrix(Matrix::Identity(2, 1)));
  CHECK(b.size() == 2);
  for (const auto& x : b) {
    CHECK(std::abs(x(1, 0)) <= 1e-12);
    CHECK(std::abs(x.trace()) <= 1e-12);
  }

  const auto sl3 = preset_pipeline("sl3-std");
  const auto st = stabilizer_subalgebra(sl3.alg, Matrix(Matrix::Identity(3, 2)));
  CHECK(st.size() == 6);
  for (const auto& x : st) {
    CHECK(std::abs(x(2, 0)) <= 1e-12);
    CHECK(std::abs(x(2, 1)) <= 1e-12);
  }
  // Oracle: solve for the coefficients over the eight generators directly.
  Matrix constraints(2, 8);
  for (int j = 0; j < 8; ++j) {
    const Matrix& g = sl3.alg.generators[static_cast<std::size_t>(j)];
    constraints(0, j) = g(2, 0);
    constraints(1, j) = g(2, 1);
  }
  Eigen::FullPivLU<Matrix> lu(constraints);
  CHECK(8 - lu.rank() == 6);
}

TEST_CASE("stabilizers are bracket-closed") {
  Rng rng(51);
  const auto p = preset_pipeline("sp4-std");
  for (int t = 0; t < 5; ++t) {
    const Eigen::Index k = 1 + t % 3;
    Eigen::HouseholderQR<Matrix> qr(Matrix(rng.normal_vector(16).reshaped(4, 4)));
    const Matrix v1 = Matrix(qr.householderQ()).leftCols(k);
    const auto coords = stabilizer_coords(p.alg, v1);
    CHECK(bracket_closure_residual(p.alg, coords) <= 1e-8);
  }
}

TEST_CASE("sandwich_check examples") {
  const auto sl2 = atlas("sl2-std");
  const auto ms2 = enumerate_mu_connected(sl2.p.rs, sl2.wd.mu_rho);
  auto r = sandwich_check(sl2.p.alg, sl2.p.rs, find_subset(ms2, {}));
  CHECK(r.ok);
  CHECK(r.dim_q_i == 2);
  CHECK(r.dim_stab == 2);
  CHECK(r.dim_q_j == 2);
  CHECK(r.dim_v1 == 1);

  const auto sl3 = atlas("sl3-std");
  const auto ms3 = enumerate_mu_connected(sl3.p.rs, sl3.wd.mu_rho);
  r = sandwich_check(sl3.p.alg, sl3.p.rs, find_subset(ms3, {}));
  CHECK(r.ok);
  CHECK(r.saturation == SimpleSubset{1});
  CHECK(r.dim_q_i == 5);
  CHECK(r.dim_stab == 6);
  CHECK(r.dim_q_j == 6);
  CHECK(r.lower_residual <= 1e-8);
  CHECK(r.upper_residual <= 1e-8);

  r = sandwich_check(sl3.p.alg, sl3.p.rs, find_subset(ms3, {0}));
  CHECK(r.ok);
  CHECK(r.dim_v1 == 2);
  CHECK(r.dim_q_i == 6);
  CHECK(r.dim_stab == 6);
  CHECK(r.dim_q_j == 6);
  CHECK(r.irreducible);
}

TEST_CASE("sandwich holds on every preset and subset") {
  for (const auto& info : presets()) {
    const auto a = atlas(info.name);
    for (const auto& m : enumerate_mu_connected(a.p.rs, a.wd.mu_rho)) {
      const auto r = sandwich_check(a.p.alg, a.p.rs, m);
      CHECK_MESSAGE(r.ok, info.name);
      CHECK(r.dim_q_i <= r.dim_stab);
      CHECK(r.dim_stab <= r.dim_q_j);
    }
  }
}

TEST_CASE("irreducible_on examples") {
  for (const auto& info : presets()) {
    const auto p = preset_pipeline(info.name);
    CHECK_MESSAGE(irreducible_on(p.alg.generators, Matrix::Identity(p.alg.n, p.alg.n)), info.name);
  }
  const auto sl2 = preset_pipeline("sl2-std");
  CHECK_FALSE(irreducible_on({sl2.alg.generators[0]}, Matrix::Identity(2, 2)));

  const auto sl3 = preset_pipeline("sl3-std");
  const auto q = q_generators(sl3.alg, sl3.rs, {0});
  const Matrix v1 = Matrix::Identity(3, 2);
  CHECK(irreducible_on(q, v1));
  // The Borel is not irreducible on the same plane.
  CHECK_FALSE(irreducible_on(q_generators(sl3.alg, sl3.rs, {}), v1));
  // Invariance is checked.
  CHECK_THROWS_AS(irreducible_on(sl3.alg.generators, v1), Error);
}

TEST_CASE("irreducible_on distinguishes real from complex reducibility") {
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  // so(2) has no invariant real line.
  CHECK(irreducible_on({rot}, Matrix::Identity(2, 2)));
  // so(2) + so(2) on R^4 splits.
  Matrix r4 = Matrix::Zero(4, 4);
  r4.topLeftCorner(2, 2) = rot;
  r4.bottomRightCorner(2, 2) = rot;
  CHECK_FALSE(irreducible_on({r4}, Matrix::Identity(4, 4)));
  // Nilpotent e on R^2 fixes the e1-line.
  Matrix e = Matrix::Zero(2, 2);
  e(0, 1) = 1;
  CHECK_FALSE(irreducible_on({e}, Matrix::Identity(2, 2)));
  CHECK_FALSE(irreducible_on({}, Matrix::Identity(2, 2)));
  CHECK(irreducible_on({}, Matrix::Identity(1, 1)));
}

TEST_CASE("flow limits land in the top eigenspace and in F_I") {
  for (const std::string name : {"sl3-std", "sl3-sym2", "sp4-std", "sl3-adj"}) {
    const auto a = atlas(name);
    const ProjectivePoint xo(a.wd.v_rho);
    for (const auto& m : enumerate_mu_connected(a.p.rs, a.wd.mu_rho)) {
      const auto bp = beta_profile(a.p.a.element(beta_for_subset(a.p.rs, m.subset)), a.p.split);
      const Matrix& v1 = bp.top_space();
      const auto face = face_from_I(m, a.p.w, a.p.rs);
      for (const auto& y : orbit_sample(a.p.split.k_basis, xo, 200, std::numbers::pi, 61)) {
        const auto lim = flow_limit(bp, y);
        CHECK(lim.stratum == 1);
        CHECK((lim.limit.rep() - v1 * (v1.transpose() * lim.limit.rep())).norm() <= 1e-9);
        CHECK_MESSAGE(face.violation(mu_a(lim.limit, a.p.a)) <= 1e-7, name);
      }
    }
  }
}
