#pragma once

// Dense real matrix kernel: brackets, the trace form, a cyclic Jacobi
// eigensolver with eigenvalue clustering, simultaneous diagonalization of
// commuting symmetric families and projections onto matrix subspaces.
//
// Everything here is a pure function of its arguments and is templated on
// the scalar type the way Eigen's own free functions are.

#include "orbitope/common.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <utility>

namespace orbitope {

namespace detail {

template <typename DA, typename DB>
void require_same_square(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y,
                         const char* op) {
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows()) {
    std::ostringstream msg;
    msg << op << ": expected square matrices of equal size, got " << x.rows() << "x"
        << x.cols() << " and " << y.rows() << "x" << y.cols();
    throw DimensionError("matkernel", msg.str());
  }
}

}  // namespace detail

/// Commutator XY - YX.
template <typename DA, typename DB>
auto bracket(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y) {
  detail::require_same_square(x, y, "bracket");
  using Scalar = typename DA::Scalar;
  MatrixX<Scalar> out = x * y - y * x;
  return out;
}

/// The trace form B(X, Y) = Tr(XY).
template <typename DA, typename DB>
typename DA::Scalar trace_form(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y) {
  detail::require_same_square(x, y, "trace_form");
  return (x.array() * y.transpose().array()).sum();
}

/// Frobenius inner product Tr(X Y^T). On symmetric matrices it agrees with
/// the trace form, on antisymmetric ones it is its negative.
template <typename DA, typename DB>
typename DA::Scalar frobenius(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y) {
  return (x.array() * y.array()).sum();
}

template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& x) {
  return x.size() == 0 ? typename Derived::Scalar(0) : x.cwiseAbs().maxCoeff();
}

/// Flips the sign of `v` so that its first coordinate with magnitude above
/// `tol` is positive.
template <typename Scalar>
void canonicalize_sign(VectorX<Scalar>& v, Scalar tol = Scalar(1e-9)) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

/// Clustered spectral data of a symmetric matrix. `vectors[c]` holds an
/// orthonormal basis (as columns) of the eigenspace of `values[c]`.
template <typename Scalar>
struct EigenData {
  std::vector<Scalar> values;
  std::vector<MatrixX<Scalar>> vectors;
  std::vector<int> multiplicities;

  std::size_t clusters() const { return values.size(); }

  /// All eigenvectors side by side, clusters in descending order.
  MatrixX<Scalar> basis() const {
    Eigen::Index n = 0;
    for (const auto& v : vectors) n = v.rows();
    const Eigen::Index total = std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
    MatrixX<Scalar> out(n, total);
    Eigen::Index col = 0;
    for (const auto& v : vectors) {
      out.middleCols(col, v.cols()) = v;
      col += v.cols();
    }
    return out;
  }
};

/// Raw cyclic Jacobi: eigenvalues in descending order with matching
/// orthonormal eigenvector columns. Throws ConvergenceError when the
/// off-diagonal mass does not vanish within `max_sweeps`.
template <typename Scalar>
std::pair<VectorX<Scalar>, MatrixX<Scalar>> jacobi_eigen(const MatrixX<Scalar>& s,
                                                         int max_sweeps = 100) {
  const Eigen::Index n = s.rows();
  MatrixX<Scalar> a = s;
  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Scalar scale = a.norm();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar target = Scalar(std::max<Eigen::Index>(n, 1)) * eps * scale;
  const Scalar negligible = eps * Scalar(1e-3) * scale;

  auto off = [&] {
    Scalar sum = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
  };

  bool converged = false;
  for (int sweep = 0; sweep <= max_sweeps; ++sweep) {
    if (off() <= target) {
      converged = true;
      break;
    }
    if (sweep == max_sweeps) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (std::abs(apq) <= negligible) continue;
        const Scalar theta = (a(q, q) - a(p, p)) / (2 * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(Scalar(1) + theta * theta));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar sn = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("matkernel", "jacobi_eigen: no convergence within " +
                                            std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  VectorX<Scalar> values(n);
  MatrixX<Scalar> vectors(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    values(k) = a(order[k], order[k]);
    vectors.col(k) = v.col(order[k]);
  }
  return {values, vectors};
}

/// Symmetric eigen-decomposition with clustering: consecutive eigenvalues
/// closer than `cluster_tol` form one cluster whose value is their mean.
template <typename Scalar>
EigenData<Scalar> sym_eigen(const MatrixX<Scalar>& s, Scalar cluster_tol = Scalar(1e-8)) {
  if (s.rows() != s.cols()) throw DimensionError("matkernel", "sym_eigen: matrix not square");
  if (max_abs(MatrixX<Scalar>(s - s.transpose())) > Scalar(1e-10)) {
    throw Error("matkernel", "sym_eigen: matrix is not symmetric");
  }
  const MatrixX<Scalar> sym = (s + s.transpose()) / 2;
  auto [values, vectors] = jacobi_eigen<Scalar>(sym);

  EigenData<Scalar> out;
  const Eigen::Index n = values.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && values(end - 1) - values(end) < cluster_tol) ++end;
    const Eigen::Index m = end - start;
    out.values.push_back(values.segment(start, m).mean());
    MatrixX<Scalar> block = vectors.middleCols(start, m);
    if (m == 1) {
      VectorX<Scalar> col = block.col(0);
      canonicalize_sign(col);
      block.col(0) = col;
    }
    out.vectors.push_back(std::move(block));
    out.multiplicities.push_back(static_cast<int>(m));
    start = end;
  }
  return out;
}

/// Common orthonormal eigenbasis of a commuting symmetric family.
/// `joint_values[j]` lists the eigenvalues of every member on basis column j;
/// `block_sizes` groups consecutive columns sharing the same joint value.
template <typename Scalar>
struct JointEigen {
  MatrixX<Scalar> basis;
  std::vector<VectorX<Scalar>> joint_values;
  std::vector<Eigen::Index> block_sizes;
};

template <typename Scalar>
JointEigen<Scalar> simultaneous_eigen(std::span<const MatrixX<Scalar>> family,
                                      Scalar cluster_tol = Scalar(1e-8),
                                      Eigen::Index dim_hint = -1) {
  const Eigen::Index n = family.empty() ? dim_hint : family.front().rows();
  if (n < 0) throw DimensionError("matkernel", "simultaneous_eigen: empty family without dimension");
  const std::size_t m = family.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& x = family[i];
    if (x.rows() != n || x.cols() != n) {
      throw DimensionError("matkernel", "simultaneous_eigen: member " + std::to_string(i) +
                                            " has mismatched size");
    }
    if (max_abs(MatrixX<Scalar>(x - x.transpose())) > Scalar(1e-10)) {
      throw Error("matkernel",
                  "simultaneous_eigen: member " + std::to_string(i) + " is not symmetric");
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (max_abs(bracket(family[i], family[j])) > Scalar(1e-8)) {
        throw Error("matkernel", "simultaneous_eigen: members " + std::to_string(i) + " and " +
                                     std::to_string(j) + " do not commute");
      }
    }
  }

  // A generic combination separates the joint eigenspaces; the fixed seed
  // keeps the function pure.
  Rng rng(0x6a09e667f3bcc908ULL);
  MatrixX<Scalar> combo = MatrixX<Scalar>::Zero(n, n);
  for (const auto& x : family) combo += Scalar(rng.uniform(0.5, 1.5)) * x;

  std::vector<MatrixX<Scalar>> blocks;
  for (auto& v : sym_eigen<Scalar>(combo, cluster_tol).vectors) blocks.push_back(std::move(v));

  // Merged near-degenerate clusters are still invariant; split them member
  // by member.
  for (const auto& x : family) {
    std::vector<MatrixX<Scalar>> next;
    for (auto& u : blocks) {
      if (u.cols() == 1) {
        next.push_back(std::move(u));
        continue;
      }
      MatrixX<Scalar> compressed = u.transpose() * x * u;
      compressed = (compressed + compressed.transpose()) / 2;
      auto ed = sym_eigen<Scalar>(compressed, cluster_tol);
      for (const auto& w : ed.vectors) next.push_back(u * w);
    }
    blocks = std::move(next);
  }

  struct Block {
    MatrixX<Scalar> vectors;
    VectorX<Scalar> value;
  };
  std::vector<Block> tagged;
  for (auto& u : blocks) {
    VectorX<Scalar> value(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      value(static_cast<Eigen::Index>(i)) = (u.transpose() * family[i] * u).trace() / Scalar(u.cols());
    }
    if (u.cols() == 1) {
      VectorX<Scalar> col = u.col(0);
      canonicalize_sign(col);
      u.col(0) = col;
    }
    tagged.push_back({std::move(u), std::move(value)});
  }
  std::stable_sort(tagged.begin(), tagged.end(), [&](const Block& a, const Block& b) {
    for (Eigen::Index i = 0; i < a.value.size(); ++i) {
      if (std::abs(a.value(i) - b.value(i)) > cluster_tol) return a.value(i) > b.value(i);
    }
    return false;
  });

  JointEigen<Scalar> out;
  out.basis.resize(n, n);
  Eigen::Index col = 0;
  for (const auto& b : tagged) {
    out.basis.middleCols(col, b.vectors.cols()) = b.vectors;
    for (Eigen::Index k = 0; k < b.vectors.cols(); ++k) out.joint_values.push_back(b.value);
    out.block_sizes.push_back(b.vectors.cols());
    col += b.vectors.cols();
  }

  for (std::size_t i = 0; i < m; ++i) {
    MatrixX<Scalar> d = out.basis.transpose() * family[i] * out.basis;
    d.diagonal().setZero();
    if (max_abs(d) > Scalar(1e-7)) {
      throw ConvergenceError("matkernel", "simultaneous_eigen: member " + std::to_string(i) +
                                              " not diagonalized by the common basis");
    }
  }
  return out;
}

/// Trace-form orthogonal projection onto span(basis).
template <typename Scalar>
struct SpanProjection {
  VectorX<Scalar> coords;
  MatrixX<Scalar> projection;
  Scalar residual = 0;
};

template <typename Scalar>
SpanProjection<Scalar> project_span(const MatrixX<Scalar>& x,
                                    std::span<const MatrixX<Scalar>> basis) {
  const auto k = static_cast<Eigen::Index>(basis.size());
  SpanProjection<Scalar> out;
  out.coords = VectorX<Scalar>::Zero(k);
  out.projection = MatrixX<Scalar>::Zero(x.rows(), x.cols());
  if (k == 0) {
    out.residual = x.norm();
    return out;
  }
  MatrixX<Scalar> gram(k, k);
  VectorX<Scalar> rhs(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    rhs(i) = trace_form(basis[i], x);
    for (Eigen::Index j = 0; j <= i; ++j) {
      gram(i, j) = gram(j, i) = trace_form(basis[i], basis[j]);
    }
  }
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(k - 1) <= Scalar(1e-12) * std::max(sv(0), Scalar(1))) {
    throw Error("matkernel", "project_span: basis is dependent under the trace form");
  }
  out.coords = svd.solve(rhs);
  for (Eigen::Index i = 0; i < k; ++i) out.projection += out.coords(i) * basis[i];
  out.residual = (x - out.projection).norm();
  return out;
}

/// Column-stacked flattening of a matrix.
template <typename Scalar>
VectorX<Scalar> flatten(const MatrixX<Scalar>& x) {
  return Eigen::Map<const VectorX<Scalar>>(x.data(), x.size());
}

template <typename Scalar>
MatrixX<Scalar> unflatten(const VectorX<Scalar>& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const MatrixX<Scalar>>(v.data(), rows, cols);
}

/// Orthonormal basis of the kernel of `a` (columns), dropping singular
/// values above `tol * max(1, sigma_max)`.
template <typename Scalar>
MatrixX<Scalar> null_space(const MatrixX<Scalar>& a, Scalar tol = Scalar(1e-9)) {
  const Eigen::Index cols = a.cols();
  if (a.rows() == 0) return MatrixX<Scalar>::Identity(cols, cols);
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Scalar cut = tol * std::max(Scalar(1), sv.size() ? sv(0) : Scalar(0));
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

/// Orthonormal basis (columns) of the column span of `a`.
template <typename Scalar>
MatrixX<Scalar> range_basis(const MatrixX<Scalar>& a, Scalar tol = Scalar(1e-9)) {
  if (a.cols() == 0) return MatrixX<Scalar>(a.rows(), 0);
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const Scalar cut = tol * std::max(Scalar(1), sv.size() ? sv(0) : Scalar(0));
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.matrixU().leftCols(rank);
}

/// Modified Gram-Schmidt under the Frobenius product. Members whose
/// remainder falls below `tol` relative to their own norm are dropped.
template <typename Scalar>
std::vector<MatrixX<Scalar>> orthonormalize(std::span<const MatrixX<Scalar>> mats,
                                            Scalar tol = Scalar(1e-9)) {
  std::vector<MatrixX<Scalar>> out;
  for (const auto& m : mats) {
    const Scalar norm0 = m.norm();
    if (norm0 == 0) continue;
    MatrixX<Scalar> r = m;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) r -= frobenius(q, r) * q;
    }
    const Scalar norm = r.norm();
    if (norm > tol * norm0) out.push_back(r / norm);
  }
  return out;
}

/// Distance of `x` from span(basis) for a Frobenius-orthonormal basis.
template <typename Scalar>
Scalar span_residual(const MatrixX<Scalar>& x, std::span<const MatrixX<Scalar>> orthonormal) {
  MatrixX<Scalar> r = x;
  for (const auto& q : orthonormal) r -= frobenius(q, r) * q;
  return r.norm();
}

/// Matrix exponential by scaling and squaring with a truncated Taylor
/// series (terms below 1e-16 relative are dropped).
template <typename Scalar>
MatrixX<Scalar> expm(const MatrixX<Scalar>& a) {
  if (a.rows() != a.cols()) throw DimensionError("matkernel", "expm: matrix not square");
  const Eigen::Index n = a.rows();
  const Scalar norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > Scalar(0.5)) squarings = static_cast<int>(std::ceil(std::log2(norm1 / Scalar(0.5))));
  const MatrixX<Scalar> b = a / std::ldexp(Scalar(1), squarings);
  MatrixX<Scalar> result = MatrixX<Scalar>::Identity(n, n);
  MatrixX<Scalar> term = MatrixX<Scalar>::Identity(n, n);
  for (int k = 1; k < 40; ++k) {
    term = term * b / Scalar(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() <= Scalar(1e-17) * result.cwiseAbs().maxCoeff()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace orbitope
