#pragma once

// Lie-structure layer: Cartan split of a matrix Lie algebra g inside
// sl(n, R), maximal abelian subspaces of p, restricted roots, the Weyl
// group and parabolic subalgebras.
//
// Elements of g are handled either as n x n matrices or as coordinate
// vectors with respect to `LieAlgebraRep::frame`, a Frobenius-orthonormal
// basis of g. Subspaces of g are stored as matrices whose orthonormal
// columns are such coordinate vectors.

#include "orbitope/matkernel.hpp"

#include <cstdint>
#include <vector>

namespace orbitope {

struct LieAlgebraRep {
  int n = 0;
  MatrixList generators;
  /// Frobenius-orthonormal basis of span(generators).
  MatrixList frame;

  int dim() const { return static_cast<int>(frame.size()); }

  Vector coords(const Matrix& x) const;
  Matrix element(const Vector& coords) const;
  /// Materializes the columns of a coordinate matrix as elements of g.
  MatrixList elements(const Matrix& coord_columns) const;
  /// Distance from `x` to g.
  double residual(const Matrix& x) const;
};

/// Validates tracelessness, independence and bracket closure of the
/// generator set and builds the coordinate frame.
LieAlgebraRep make_algebra(int n, MatrixList generators, double tol = 1e-8);

struct CartanSplit {
  MatrixList k_basis;  // antisymmetric, Frobenius-orthonormal
  MatrixList p_basis;  // symmetric traceless, trace-form-orthonormal
  int dim_g = 0;
};

CartanSplit cartan_split(const LieAlgebraRep& alg, double tol = 1e-8);

/// Coordinates of a symmetric matrix in p_basis and its distance to p.
Vector p_coords(const CartanSplit& split, const Matrix& x);
double p_residual(const CartanSplit& split, const Matrix& x);

struct AbelianSlice {
  MatrixList a_basis;  // pairwise commuting, trace-form-orthonormal
  int rank() const { return static_cast<int>(a_basis.size()); }

  /// H = sum_i v_i a_basis[i].
  Matrix element(const Vector& v) const;
  /// Coordinates of H (assumed in a) in a_basis.
  Vector coords(const Matrix& h) const;
};

/// Greedy maximal abelian subspace of p starting from a random element.
AbelianSlice maximal_abelian(const CartanSplit& split, std::uint64_t seed);
/// Same construction, but deterministic: starts from p_basis[0] and adjoins
/// centralizer elements in p_basis order. Diagonal presets keep a diagonal.
AbelianSlice canonical_abelian(const CartanSplit& split);

/// Orthonormal coordinates (in p_basis) of {X in p : [X, h] = 0 for all h}.
Matrix centralizer_in_p(const CartanSplit& split, const MatrixList& elements);

/// ad(h) in the Frobenius frame of g: M(i, j) = <frame_i, [h, frame_j]>.
/// Symmetric whenever h is symmetric.
Matrix ad_matrix(const LieAlgebraRep& alg, const Matrix& h);

using SimpleSubset = std::vector<int>;

struct RestrictedRootSystem {
  MatrixList a_basis;
  /// Distinct roots in a-coordinates: positives (by decreasing pairing with
  /// the regular functional) followed by their negatives in the same order.
  std::vector<Vector> roots;
  std::vector<int> root_space_dims;
  std::vector<Matrix> root_spaces;  // frame coordinates, orthonormal columns
  Matrix zero_space;                // g_0 = m + a in frame coordinates
  std::vector<int> positive;        // indices into roots
  std::vector<int> simple;          // indices into roots, base order
  Vector regular_functional;

  int rank() const { return static_cast<int>(a_basis.size()); }
  int zero_space_dim() const { return static_cast<int>(zero_space.cols()); }
  const Vector& simple_root(int i) const { return roots[static_cast<std::size_t>(simple[static_cast<std::size_t>(i)])]; }
  int num_simple() const { return static_cast<int>(simple.size()); }
  bool is_positive(int root_index) const;
  /// Coefficients of `v` over the base.
  Vector simple_coefficients(const Vector& v) const;
  /// Index of a root equal to `v` within `tol`, or -1.
  int find_root(const Vector& v, double tol = 1e-7) const;
};

RestrictedRootSystem restricted_roots(const LieAlgebraRep& alg, const AbelianSlice& a,
                                      double tol = 1e-8);

/// Orthogonal reflection of a-coordinates in the hyperplane alpha^perp.
Matrix reflection(const Vector& alpha);

struct WeylGroup {
  std::vector<Matrix> elements;  // elements[0] is the identity
  std::vector<Matrix> generators;
  int order() const { return static_cast<int>(elements.size()); }
};

/// Finite group generated by `generators`, closed breadth-first with
/// max-entry deduplication at `tol`.
WeylGroup generate_group(const std::vector<Matrix>& generators, int dim, double tol = 1e-8,
                         int max_order = 1000000);
WeylGroup weyl_group(const RestrictedRootSystem& rs, double tol = 1e-8, int max_order = 1000000);

/// Roots lying in span(I) (Delta_I), as indices into rs.roots.
std::vector<int> roots_in_span(const RestrictedRootSystem& rs, const SimpleSubset& subset);

struct ParabolicData {
  SimpleSubset subset;
  Matrix q;          // q_I = g_0 + sum over Delta_I u Delta_+ of g_lambda
  Matrix n;          // n_I
  Matrix n_minus;    // n_I^- built from Delta_- \ Delta_I
  Matrix m;          // m_I = m + a^I + sum over Delta_I of g_lambda
  Matrix a_lower;    // a_I, columns in a-coordinates
  Matrix a_upper;    // a^I, columns in a-coordinates
};

ParabolicData parabolic_from_subset(const LieAlgebraRep& alg, const RestrictedRootSystem& rs,
                                    const SimpleSubset& subset, double tol = 1e-8);

struct BetaParabolic {
  Matrix q;  // nonnegative ad(beta) eigenspaces, frame coordinates
  Matrix r;  // positive ad(beta) eigenspaces
};

BetaParabolic parabolic_from_beta(const LieAlgebraRep& alg, const CartanSplit& split,
                                  const Matrix& beta, double tol = 1e-8);

/// beta in a with lambda(beta) = 0 on I and lambda(beta) = 1 on the rest of
/// the base; the a-posteriori check covers every positive root.
Vector beta_for_subset(const RestrictedRootSystem& rs, const SimpleSubset& subset);

/// Largest distance of a column of `inner` from span(outer); both are
/// orthonormal coordinate matrices.
double subspace_excess(const Matrix& inner, const Matrix& outer);

/// Largest residual of [x, y] outside span(basis) over basis pairs.
double bracket_closure_residual(const LieAlgebraRep& alg, const Matrix& basis);

}  // namespace orbitope
