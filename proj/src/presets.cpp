#include "orbitope/presets.hpp"

namespace orbitope {

namespace {

Matrix unit(int n, int i, int j) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

Matrix diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.asDiagonal();
}

}  // namespace

std::vector<std::string> base_names() { return {"sl2", "sl3", "so21", "sp4"}; }

MatrixList base_generators(const std::string& base) {
  if (base == "sl2") return {diag({1, -1}), unit(2, 0, 1), unit(2, 1, 0)};
  if (base == "sl3") {
    MatrixList g{diag({2, -1, -1}), diag({0, 1, -1})};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i != j) g.push_back(unit(3, i, j));
      }
    }
    return g;
  }
  if (base == "so21") {
    // Preserves the form diag(1, 1, -1).
    return {Matrix(unit(3, 0, 2) + unit(3, 2, 0)), Matrix(unit(3, 1, 2) + unit(3, 2, 1)),
            Matrix(unit(3, 0, 1) - unit(3, 1, 0))};
  }
  if (base == "sp4") {
    // [[A, B], [C, -A^T]] with B, C symmetric.
    MatrixList g{diag({1, 0, -1, 0}), diag({0, 1, 0, -1})};
    g.push_back(Matrix(unit(4, 0, 1) - unit(4, 3, 2)));
    g.push_back(Matrix(unit(4, 1, 0) - unit(4, 2, 3)));
    g.push_back(unit(4, 0, 2));
    g.push_back(unit(4, 1, 3));
    g.push_back(Matrix(unit(4, 0, 3) + unit(4, 1, 2)));
    g.push_back(unit(4, 2, 0));
    g.push_back(unit(4, 3, 1));
    g.push_back(Matrix(unit(4, 3, 0) + unit(4, 2, 1)));
    return g;
  }
  throw Error("presets", "unknown base algebra '" + base + "'");
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> all{
      {"sl2-std", "sl2", {"standard", 1}, "SL(2,R) on R^2"},
      {"sl2-sym2", "sl2", {"sym_power", 2}, "SL(2,R) on binary quadratic forms, R^3"},
      {"sl3-std", "sl3", {"standard", 1}, "SL(3,R) on R^3"},
      {"sl3-sym2", "sl3", {"sym_power", 2}, "SL(3,R) on ternary quadratic forms, R^6"},
      {"so21-std", "so21", {"standard", 1}, "SO(2,1) on R^3"},
      {"sp4-std", "sp4", {"standard", 1}, "Sp(4,R) on R^4"},
      {"sl3-adj", "sl3", {"adjoint", 1}, "SL(3,R) on sl(3,R), R^8"},
  };
  return all;
}

const PresetInfo& find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw Error("presets", "unknown preset '" + name + "'");
}

LieAlgebraRep build_representation(const LieAlgebraRep& base, const RepresentationSpec& rep) {
  if (rep.kind == "standard") return base;
  if (rep.kind == "sym_power") return rep.k == 1 ? base : sym_power_rep(base, rep.k).alg;
  if (rep.kind == "adjoint") return adjoint_rep(base).alg;
  throw Error("presets", "unknown representation kind '" + rep.kind + "'");
}

Pipeline make_pipeline(const LieAlgebraRep& alg, double tol) {
  Pipeline p;
  p.alg = alg;
  p.split = cartan_split(alg, tol);
  p.a = canonical_abelian(p.split);
  p.rs = restricted_roots(alg, p.a, tol);
  p.w = weyl_group(p.rs, tol);
  return p;
}

Pipeline preset_pipeline(const std::string& name, double tol) {
  const auto& info = find_preset(name);
  const auto base = make_algebra(static_cast<int>(base_generators(info.base).front().rows()),
                                 base_generators(info.base), tol);
  return make_pipeline(build_representation(base, info.rep), tol);
}

}  // namespace orbitope
