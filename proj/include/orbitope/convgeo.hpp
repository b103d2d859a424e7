#pragma once

// Convex geometry in a at desk scale: brute-force hulls, support functions,
// exposed faces, face lattices and Weyl-orbit polytopes.

#include "orbitope/liealg.hpp"

#include <span>
#include <utility>
#include <vector>

namespace orbitope {

/// {x : <x, normal> <= offset} (facet) or {x : <x, normal> = offset}
/// (affine-hull equation). Normals are unit vectors.
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

struct Polytope {
  int ambient_dim = 0;
  int dim = 0;  // affine dimension
  std::vector<Vector> vertices;
  std::vector<Halfspace> facets;     // inside the affine hull
  std::vector<Halfspace> equations;  // cut out the affine hull

  double support(const Vector& u) const;
  /// Largest violation of a facet inequality or hull equation by x.
  double violation(const Vector& x) const;
  bool contains(const Vector& x, double slack = 1e-8) const { return violation(x) <= slack; }
};

struct FaceDescriptor {
  std::vector<int> vertex_indices;  // sorted
  Vector supporting_normal;         // zero for the polytope itself
  int dim = 0;
};

struct HullOptions {
  int max_dim = 6;
  int max_points = 64;
  double dedup = 1e-8;
  double tight = 1e-9;
};

/// Affine dimension of a point set (singular values above 1e-9).
int affine_dimension(std::span<const Vector> points);

/// Irredundant vertices and the complete facet list of conv(points), by
/// exhaustive enumeration of hyperplanes through affinely independent
/// point subsets inside the affine hull.
Polytope hull(std::span<const Vector> points, const HullOptions& options = {});

/// h(u) = max <v, u> and the exposed face F_u(P).
std::pair<double, FaceDescriptor> support_face(const Polytope& p, const Vector& u,
                                               double tight = 1e-9);

/// All nonempty faces, including P itself, ordered by dimension then by
/// vertex index list.
std::vector<FaceDescriptor> face_lattice(const Polytope& p, double tight = 1e-9);

bool polytope_equal(const Polytope& a, const Polytope& b, double tol = 1e-8);

/// {w v : w in W} with duplicates removed, in group element order.
std::vector<Vector> weyl_orbit(const WeylGroup& w, const Vector& v, double dedup = 1e-8);
Polytope weyl_orbit_polytope(const WeylGroup& w, const Vector& v, double dedup = 1e-8);

/// Index of the vertex of p equal to x within tol, or -1.
int find_vertex(const Polytope& p, const Vector& x, double tol = 1e-7);

}  // namespace orbitope
