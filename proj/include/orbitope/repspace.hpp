#pragma once

// Representation constructors and the weight decomposition of a maximal
// abelian subspace a acting on R^n.

#include "orbitope/liealg.hpp"

#include <vector>

namespace orbitope {

/// An induced representation together with the largest trace that had to be
/// removed from an image generator to land in sl(N).
struct InducedRep {
  LieAlgebraRep alg;
  double trace_removed = 0.0;
};

/// Exponent vectors of the degree-k monomials in n variables, in
/// lexicographically descending order (x1^k first).
std::vector<std::vector<int>> monomial_exponents(int n, int k);

/// Induced action on Sym^k(R^n) in the orthonormal monomial basis
/// sqrt(k! / prod m_i!) x^m. Dimension is capped at `max_dim`.
InducedRep sym_power_rep(const LieAlgebraRep& alg, int k, int max_dim = 512);

/// Adjoint action of g on itself in the Frobenius frame of g.
InducedRep adjoint_rep(const LieAlgebraRep& alg);

struct WeightData {
  std::vector<Vector> weights;       // distinct, a-coordinates
  std::vector<Matrix> weight_spaces; // orthonormal columns in R^n
  int highest_index = -1;
  Vector mu_rho;
  Vector v_rho;

  std::vector<int> multiplicities() const;
  const Vector& highest() const { return weights[static_cast<std::size_t>(highest_index)]; }
};

/// Index of the weight with the largest pairing against the regular
/// functional of `rs`; checks uniqueness and dominance.
int highest_weight(const std::vector<Vector>& weights, const RestrictedRootSystem& rs);

WeightData weights(const LieAlgebraRep& alg, const AbelianSlice& a, const RestrictedRootSystem& rs,
                   double tol = 1e-8);

}  // namespace orbitope
