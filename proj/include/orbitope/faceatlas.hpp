#pragma once

// mu_rho-connected subsets of the base, the faces
//   F_I = y0 + conv(W_I . y1)
// of the momentum polytope P = conv(W . mu_rho), their correspondence with
// the faces of P modulo W, stabilizers of top eigenspaces and the parabolic
// sandwich q_I <= stab(V1) <= q_J.

#include "orbitope/convgeo.hpp"
#include "orbitope/gradmap.hpp"
#include "orbitope/repspace.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orbitope {

struct MuConnectedSubset {
  SimpleSubset subset;      // I
  SimpleSubset saturation;  // J = I u I'
  Vector y0;                // component of mu_rho in a_I
  Vector y1;                // component of mu_rho in a^I
};

/// True when |<x, y>| <= rel_tol |x| |y|.
bool orthogonal(const Vector& x, const Vector& y, double rel_tol = 1e-9);

/// Every I in the base whose connected components each contain a root not
/// orthogonal to mu_rho; ordered by size, then lexicographically.
std::vector<MuConnectedSubset> enumerate_mu_connected(const RestrictedRootSystem& rs,
                                                      const Vector& mu_rho,
                                                      double rel_tol = 1e-9);

/// The mu_rho-saturation of I.
SimpleSubset saturation(const RestrictedRootSystem& rs, const Vector& mu_rho,
                        const SimpleSubset& subset, double rel_tol = 1e-9);

/// Subgroup of the Weyl group generated by the reflections in I.
WeylGroup weyl_subgroup(const RestrictedRootSystem& rs, const SimpleSubset& subset);

/// y0 + conv(W_I . y1). Throws if the result is not a face of
/// conv(W . (y0 + y1)).
Polytope face_from_I(const MuConnectedSubset& ms, const WeylGroup& w, const RestrictedRootSystem& rs);

/// The face of p whose vertex set is exactly `vertices` (within tol).
std::optional<FaceDescriptor> match_face(const Polytope& p, const std::vector<Vector>& vertices,
                                         double tol = 1e-7);

/// Vertex permutation induced by each Weyl element: perms[e][i] = index of
/// w_e . vertex_i.
std::vector<std::vector<int>> vertex_permutations(const WeylGroup& w, const Polytope& p,
                                                  double tol = 1e-7);

/// Lexicographically smallest sorted image of `face` under the permutations.
std::vector<int> canonical_face(const std::vector<int>& face,
                                const std::vector<std::vector<int>>& perms);

struct AtlasClass {
  MuConnectedSubset subset;
  FaceDescriptor face;             // F_I as a face of P
  std::vector<int> representative; // lexicographically smallest vertex set in the W-class
  int orbit_size = 0;
};

struct AtlasReport {
  std::vector<AtlasClass> classes;
  int lattice_classes = 0;  // faces of P modulo W, counted independently
  bool matched = false;
  std::vector<std::string> diff;
};

AtlasReport casselman_correspondence(const RestrictedRootSystem& rs, const WeylGroup& w,
                                     const Vector& mu_rho, const Polytope& p);

/// {X in g : X V1 <= V1}, as frame coordinates of g (orthonormal columns).
Matrix stabilizer_coords(const LieAlgebraRep& alg, const Matrix& v1, double tol = 1e-8);
MatrixList stabilizer_subalgebra(const LieAlgebraRep& alg, const Matrix& v1, double tol = 1e-8);

/// Whether the span of `gens` acts irreducibly on span(subspace_basis).
/// Throws if the subspace is not invariant.
bool irreducible_on(const MatrixList& gens, const Matrix& subspace_basis, std::uint64_t seed = 7,
                    double tol = 1e-8);

struct SandwichReport {
  SimpleSubset subset;
  SimpleSubset saturation;
  int dim_q_i = 0;
  int dim_stab = 0;
  int dim_q_j = 0;
  int dim_v1 = 0;
  double lower_residual = 0.0;  // q_I outside stab
  double upper_residual = 0.0;  // stab outside q_J
  bool irreducible = false;
  bool ok = false;
};

SandwichReport sandwich_check(const LieAlgebraRep& alg, const RestrictedRootSystem& rs,
                              const MuConnectedSubset& ms, double tol = 1e-8);

}  // namespace orbitope
