#include "orbitope/faceatlas.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <map>
#include <set>

namespace orbitope {

bool orthogonal(const Vector& x, const Vector& y, double rel_tol) {
  return std::abs(x.dot(y)) <= rel_tol * x.norm() * y.norm();
}

namespace {

// Connected components of I under the non-orthogonality graph.
std::vector<SimpleSubset> components(const RestrictedRootSystem& rs, const SimpleSubset& subset,
                                     double rel_tol) {
  std::vector<SimpleSubset> out;
  std::vector<bool> seen(subset.size(), false);
  for (std::size_t s = 0; s < subset.size(); ++s) {
    if (seen[s]) continue;
    SimpleSubset comp{subset[s]};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (std::size_t t = 0; t < subset.size(); ++t) {
        if (seen[t]) continue;
        if (!orthogonal(rs.simple_root(comp[head]), rs.simple_root(subset[t]), rel_tol)) {
          seen[t] = true;
          comp.push_back(subset[t]);
        }
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

Vector project_onto_span(const RestrictedRootSystem& rs, const SimpleSubset& subset, const Vector& v) {
  if (subset.empty()) return Vector::Zero(v.size());
  Matrix m(rs.rank(), static_cast<Eigen::Index>(subset.size()));
  for (std::size_t i = 0; i < subset.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = rs.simple_root(subset[i]);
  const Matrix q = range_basis<double>(m);
  return q * (q.transpose() * v);
}

std::vector<Vector> dedup(const std::vector<Vector>& pts, double tol) {
  std::vector<Vector> out;
  for (const auto& p : pts) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Vector& q) {
      return (q - p).cwiseAbs().maxCoeff() <= tol;
    });
    if (!dup) out.push_back(p);
  }
  return out;
}

std::vector<int> vertex_indices_of(const Polytope& p, const std::vector<Vector>& vertices, double tol) {
  std::vector<int> idx;
  for (const auto& v : vertices) {
    const int k = find_vertex(p, v, tol);
    if (k < 0) return {};
    idx.push_back(k);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

}  // namespace

SimpleSubset saturation(const RestrictedRootSystem& rs, const Vector& mu_rho, const SimpleSubset& subset,
                        double rel_tol) {
  SimpleSubset j = subset;
  for (int a = 0; a < rs.num_simple(); ++a) {
    if (std::find(subset.begin(), subset.end(), a) != subset.end()) continue;
    const Vector& alpha = rs.simple_root(a);
    if (!orthogonal(alpha, mu_rho, rel_tol)) continue;
    const bool perp_to_i = std::all_of(subset.begin(), subset.end(), [&](int b) {
      return orthogonal(alpha, rs.simple_root(b), rel_tol);
    });
    if (perp_to_i) j.push_back(a);
  }
  std::sort(j.begin(), j.end());
  return j;
}

std::vector<MuConnectedSubset> enumerate_mu_connected(const RestrictedRootSystem& rs,
                                                      const Vector& mu_rho, double rel_tol) {
  const int r = rs.num_simple();
  if (r > 20) throw Error("faceatlas", "enumerate_mu_connected: base too large for exhaustive search");
  std::vector<MuConnectedSubset> out;
  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    SimpleSubset subset;
    for (int i = 0; i < r; ++i) {
      if (mask & (1u << i)) subset.push_back(i);
    }
    const auto comps = components(rs, subset, rel_tol);
    const bool ok = std::all_of(comps.begin(), comps.end(), [&](const SimpleSubset& c) {
      return std::any_of(c.begin(), c.end(), [&](int a) { return !orthogonal(rs.simple_root(a), mu_rho, rel_tol); });
    });
    if (!ok) continue;
    MuConnectedSubset ms;
    ms.subset = subset;
    ms.saturation = saturation(rs, mu_rho, subset, rel_tol);
    ms.y1 = project_onto_span(rs, subset, mu_rho);
    ms.y0 = mu_rho - ms.y1;
    out.push_back(std::move(ms));
  }
  std::stable_sort(out.begin(), out.end(), [](const MuConnectedSubset& a, const MuConnectedSubset& b) {
    if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
    return a.subset < b.subset;
  });
  return out;
}

WeylGroup weyl_subgroup(const RestrictedRootSystem& rs, const SimpleSubset& subset) {
  std::vector<Matrix> gens;
  for (int i : subset) gens.push_back(reflection(rs.simple_root(i)));
  return generate_group(gens, rs.rank());
}

std::optional<FaceDescriptor> match_face(const Polytope& p, const std::vector<Vector>& vertices, double tol) {
  const std::vector<int> idx = vertex_indices_of(p, vertices, tol);
  if (idx.empty()) return std::nullopt;
  for (const auto& face : face_lattice(p)) {
    if (face.vertex_indices != idx) continue;
    // The lattice normal must expose exactly this vertex set.
    if (face.supporting_normal.norm() > 0.0) {
      const auto exposed = support_face(p, face.supporting_normal, 1e-9).second;
      if (exposed.vertex_indices != idx) return std::nullopt;
    }
    return face;
  }
  return std::nullopt;
}

Polytope face_from_I(const MuConnectedSubset& ms, const WeylGroup& w, const RestrictedRootSystem& rs) {
  const WeylGroup wi = weyl_subgroup(rs, ms.subset);
  std::vector<Vector> pts;
  for (const auto& e : wi.elements) pts.push_back(ms.y0 + e * ms.y1);
  const Polytope face = hull(dedup(pts, 1e-8));
  const Polytope whole = weyl_orbit_polytope(w, Vector(ms.y0 + ms.y1));
  if (!match_face(whole, face.vertices)) {
    throw Error("faceatlas", "face_from_I: y0 + conv(W_I y1) is not a face of the momentum polytope");
  }
  return face;
}

std::vector<std::vector<int>> vertex_permutations(const WeylGroup& w, const Polytope& p, double tol) {
  std::vector<std::vector<int>> perms;
  for (const auto& e : w.elements) {
    std::vector<int> perm;
    for (const auto& v : p.vertices) {
      const int k = find_vertex(p, Vector(e * v), tol);
      if (k < 0) throw Error("faceatlas", "vertex_permutations: polytope is not Weyl-invariant");
      perm.push_back(k);
    }
    perms.push_back(std::move(perm));
  }
  return perms;
}

std::vector<int> canonical_face(const std::vector<int>& face, const std::vector<std::vector<int>>& perms) {
  std::vector<int> best = face;
  std::sort(best.begin(), best.end());
  for (const auto& perm : perms) {
    std::vector<int> image;
    for (int i : face) image.push_back(perm[static_cast<std::size_t>(i)]);
    std::sort(image.begin(), image.end());
    best = std::min(best, image);
  }
  return best;
}

AtlasReport casselman_correspondence(const RestrictedRootSystem& rs, const WeylGroup& w, const Vector& mu_rho,
                                     const Polytope& p) {
  const auto perms = vertex_permutations(w, p);
  auto orbit_size = [&](const std::vector<int>& face) {
    std::set<std::vector<int>> images;
    for (const auto& perm : perms) {
      std::vector<int> image;
      for (int i : face) image.push_back(perm[static_cast<std::size_t>(i)]);
      std::sort(image.begin(), image.end());
      images.insert(std::move(image));
    }
    return static_cast<int>(images.size());
  };

  // Right-hand side: the face lattice modulo W.
  std::map<std::vector<int>, FaceDescriptor> lattice_classes;
  for (const auto& face : face_lattice(p)) {
    const auto key = canonical_face(face.vertex_indices, perms);
    lattice_classes.emplace(key, face);
  }

  AtlasReport report;
  report.lattice_classes = static_cast<int>(lattice_classes.size());
  std::set<std::vector<int>> hit;
  bool ok = true;
  for (const auto& ms : enumerate_mu_connected(rs, mu_rho)) {
    std::string name = "{";
    for (std::size_t i = 0; i < ms.subset.size(); ++i) name += (i ? "," : "") + std::to_string(ms.subset[i]);
    name += "}";
    Polytope face_poly;
    try {
      face_poly = face_from_I(ms, w, rs);
    } catch (const Error& e) {
      report.diff.push_back("subset " + name + ": " + e.what());
      ok = false;
      continue;
    }
    const auto face = match_face(p, face_poly.vertices);
    if (!face) {
      report.diff.push_back("subset " + name + ": F_I is not a face of P");
      ok = false;
      continue;
    }
    const auto key = canonical_face(face->vertex_indices, perms);
    auto it = lattice_classes.find(key);
    if (it == lattice_classes.end()) {
      report.diff.push_back("subset " + name + ": face class missing from the lattice");
      ok = false;
      continue;
    }
    std::vector<Vector> rep_pts;
    for (int i : face->vertex_indices) rep_pts.push_back(p.vertices[static_cast<std::size_t>(i)]);
    if (!polytope_equal(face_poly, hull(rep_pts), 1e-7)) {
      report.diff.push_back("subset " + name + ": F_I differs from its lattice face");
      ok = false;
    }
    if (!hit.insert(key).second) {
      report.diff.push_back("subset " + name + ": face class already taken by another subset");
      ok = false;
    }
    AtlasClass cls;
    cls.subset = ms;
    cls.face = *face;
    cls.representative = key;
    cls.orbit_size = orbit_size(face->vertex_indices);
    report.classes.push_back(std::move(cls));
  }
  for (const auto& [key, face] : lattice_classes) {
    if (hit.count(key)) continue;
    std::string name = "[";
    for (std::size_t i = 0; i < key.size(); ++i) name += (i ? "," : "") + std::to_string(key[i]);
    name += "]";
    report.diff.push_back("face class " + name + " (dim " + std::to_string(face.dim) + ") has no subset");
    ok = false;
  }
  report.matched = ok && report.lattice_classes == static_cast<int>(report.classes.size());
  return report;
}

Matrix stabilizer_coords(const LieAlgebraRep& alg, const Matrix& v1, double tol) {
  if (v1.rows() != alg.n) throw DimensionError("faceatlas", "stabilizer: subspace lives in the wrong space");
  const Matrix u = range_basis<double>(v1);
  const Matrix compress = Matrix::Identity(alg.n, alg.n) - u * u.transpose();
  Matrix map(alg.n * u.cols(), alg.dim());
  for (int k = 0; k < alg.dim(); ++k) {
    const Matrix image = compress * alg.frame[static_cast<std::size_t>(k)] * u;
    map.col(k) = flatten<double>(image);
  }
  const Matrix stab = u.cols() == 0 ? Matrix(Matrix::Identity(alg.dim(), alg.dim())) : null_space<double>(map, tol);
  if (stab.cols() > 0 && bracket_closure_residual(alg, stab) > 1e3 * tol) {
    throw Error("faceatlas", "stabilizer: solution space is not bracket-closed");
  }
  return stab;
}

MatrixList stabilizer_subalgebra(const LieAlgebraRep& alg, const Matrix& v1, double tol) {
  return alg.elements(stabilizer_coords(alg, v1, tol));
}

bool irreducible_on(const MatrixList& gens, const Matrix& subspace_basis, std::uint64_t seed, double tol) {
  const Matrix u = range_basis<double>(subspace_basis);
  const Eigen::Index d = u.cols();
  if (d == 0) throw Error("faceatlas", "irreducible_on: empty subspace");
  const Eigen::Index n = u.rows();
  const Matrix compress = Matrix::Identity(n, n) - u * u.transpose();

  MatrixList restricted;
  for (const auto& g : gens) {
    if (g.rows() != n || g.cols() != n) throw DimensionError("faceatlas", "irreducible_on: generator size");
    if ((compress * g * u).norm() > tol * std::max(1.0, g.norm())) {
      throw Error("faceatlas", "irreducible_on: generators do not preserve the subspace");
    }
    restricted.push_back(u.transpose() * g * u);
  }
  if (d == 1) return true;

  // Quick reject: the cyclic subspace of a random vector.
  Rng rng(seed);
  for (int trial = 0; trial < 3; ++trial) {
    Matrix span = range_basis<double>(Matrix(rng.normal_vector(d)));
    for (;;) {
      Matrix grown = span;
      for (const auto& r : restricted) {
        Matrix next(d, grown.cols() + span.cols());
        next << grown, r * span;
        grown = next;
      }
      grown = range_basis<double>(grown, 1e-10);
      if (grown.cols() == span.cols()) break;
      span = grown;
    }
    if (span.cols() < d) return false;
  }

  // Associative algebra generated by the restrictions and the identity.
  MatrixList algebra{Matrix(Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d)))};
  for (std::size_t head = 0; head < algebra.size(); ++head) {
    for (const auto& r : restricted) {
      const Matrix product = r * algebra[head];
      Matrix rem = product;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : algebra) rem -= frobenius(q, rem) * q;
      }
      if (rem.norm() > 1e-9 * std::max(1.0, product.norm())) algebra.push_back(rem / rem.norm());
    }
  }

  // A nonzero radical of the trace form means a non-semisimple action.
  const auto dim_a = static_cast<Eigen::Index>(algebra.size());
  Matrix gram(dim_a, dim_a);
  for (Eigen::Index i = 0; i < dim_a; ++i) {
    for (Eigen::Index j = 0; j < dim_a; ++j) gram(i, j) = trace_form(algebra[static_cast<std::size_t>(i)], algebra[static_cast<std::size_t>(j)]);
  }
  if (null_space<double>(gram, 1e-8).cols() > 0) return false;

  // Semisimple: irreducible iff the commutant is a division algebra.
  Matrix commute(static_cast<Eigen::Index>(restricted.size()) * d * d, d * d);
  for (std::size_t g = 0; g < restricted.size(); ++g) {
    for (Eigen::Index k = 0; k < d * d; ++k) {
      Vector e = Vector::Zero(d * d);
      e(k) = 1.0;
      const Matrix c = unflatten<double>(e, d, d);
      commute.block(static_cast<Eigen::Index>(g) * d * d, k, d * d, 1) =
          flatten<double>(Matrix(restricted[g] * c - c * restricted[g]));
    }
  }
  const Matrix commutant = restricted.empty() ? Matrix(Matrix::Identity(d * d, d * d)) : null_space<double>(commute, 1e-9);
  if (commutant.cols() == 1) return true;
  if (commutant.cols() > 4) return false;
  for (int trial = 0; trial < 3; ++trial) {
    const Vector mix = rng.normal_vector(commutant.cols());
    const Matrix c = unflatten<double>(Vector(commutant * mix), d, d);
    const Eigen::EigenSolver<Matrix> es(c, false);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, c.norm());
    const std::complex<double> first = ev(0);
    for (Eigen::Index i = 1; i < ev.size(); ++i) {
      const bool same = std::abs(ev(i) - first) <= 1e-6 * scale;
      const bool conj = std::abs(ev(i) - std::conj(first)) <= 1e-6 * scale;
      if (!same && !conj) return false;
    }
  }
  return true;
}

SandwichReport sandwich_check(const LieAlgebraRep& alg, const RestrictedRootSystem& rs,
                              const MuConnectedSubset& ms, double tol) {
  SandwichReport report;
  report.subset = ms.subset;
  report.saturation = ms.saturation;
  const Vector beta_coords = beta_for_subset(rs, ms.subset);
  Matrix beta = Matrix::Zero(alg.n, alg.n);
  for (int i = 0; i < rs.rank(); ++i) beta += beta_coords(i) * rs.a_basis[static_cast<std::size_t>(i)];
  const BetaProfile bp = beta_profile(beta);
  const Matrix& v1 = bp.top_space();
  report.dim_v1 = static_cast<int>(v1.cols());

  const Matrix stab = stabilizer_coords(alg, v1, tol);
  const ParabolicData qi = parabolic_from_subset(alg, rs, ms.subset, tol);
  const ParabolicData qj = parabolic_from_subset(alg, rs, ms.saturation, tol);
  report.dim_q_i = static_cast<int>(qi.q.cols());
  report.dim_stab = static_cast<int>(stab.cols());
  report.dim_q_j = static_cast<int>(qj.q.cols());
  report.lower_residual = subspace_excess(qi.q, stab);
  report.upper_residual = subspace_excess(stab, qj.q);
  report.irreducible = irreducible_on(alg.elements(qi.q), v1);
  report.ok = report.lower_residual <= tol && report.upper_residual <= tol && report.irreducible;
  return report;
}

}  // namespace orbitope
