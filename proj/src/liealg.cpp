#include "orbitope/liealg.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace orbitope {

namespace {

constexpr double kPositivityEpsilon = 1e-3;

Matrix hstack(const std::vector<Matrix>& blocks, Eigen::Index rows) {
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

double scale_of(const Matrix& x) { return std::max(1.0, x.norm()); }

}  // namespace

Vector LieAlgebraRep::coords(const Matrix& x) const {
  Vector c(dim());
  for (int i = 0; i < dim(); ++i) c(i) = frobenius(frame[static_cast<std::size_t>(i)], x);
  return c;
}

Matrix LieAlgebraRep::element(const Vector& c) const {
  Matrix x = Matrix::Zero(n, n);
  for (int i = 0; i < dim(); ++i) x += c(i) * frame[static_cast<std::size_t>(i)];
  return x;
}

MatrixList LieAlgebraRep::elements(const Matrix& coord_columns) const {
  MatrixList out;
  out.reserve(static_cast<std::size_t>(coord_columns.cols()));
  for (Eigen::Index j = 0; j < coord_columns.cols(); ++j) out.push_back(element(coord_columns.col(j)));
  return out;
}

double LieAlgebraRep::residual(const Matrix& x) const {
  return span_residual<double>(x, frame);
}

LieAlgebraRep make_algebra(int n, MatrixList generators, double tol) {
  if (n < 1) throw DimensionError("liealg", "representation dimension must be positive");
  if (generators.empty()) throw Error("liealg", "no generators");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const auto& x = generators[i];
    if (x.rows() != n || x.cols() != n) {
      throw DimensionError("liealg", "generator " + std::to_string(i) + " is not " +
                                         std::to_string(n) + "x" + std::to_string(n));
    }
    if (!x.allFinite()) throw Error("liealg", "generator " + std::to_string(i) + " is not finite");
    if (std::abs(x.trace()) > 1e-10 * scale_of(x)) {
      throw Error("liealg", "generator " + std::to_string(i) + " is not traceless");
    }
  }
  LieAlgebraRep alg;
  alg.n = n;
  alg.frame = orthonormalize<double>(generators);
  if (alg.frame.size() != generators.size()) {
    throw Error("liealg", "generators are linearly dependent");
  }
  // Independence under the trace form (nondegenerate on semisimple g).
  try {
    (void)project_span<double>(Matrix::Zero(n, n), generators);
  } catch (const Error&) {
    throw Error("liealg", "generators are dependent under the trace form");
  }
  alg.generators = std::move(generators);
  for (std::size_t i = 0; i < alg.generators.size(); ++i) {
    for (std::size_t j = i + 1; j < alg.generators.size(); ++j) {
      const Matrix b = bracket(alg.generators[i], alg.generators[j]);
      if (alg.residual(b) > tol * scale_of(b)) {
        throw Error("liealg", "generators not closed under bracket (pair " + std::to_string(i) +
                                  ", " + std::to_string(j) + ")");
      }
    }
  }
  return alg;
}

CartanSplit cartan_split(const LieAlgebraRep& alg, double tol) {
  MatrixList sym, antisym;
  for (std::size_t i = 0; i < alg.generators.size(); ++i) {
    const Matrix& x = alg.generators[i];
    const Matrix s = (x + x.transpose()) / 2;
    const Matrix a = (x - x.transpose()) / 2;
    if (alg.residual(s) > tol * scale_of(x) || alg.residual(a) > tol * scale_of(x)) {
      throw Error("liealg", "not compatible: transpose of generator " + std::to_string(i) +
                                " leaves g");
    }
    // Roundoff-sized parts would be normalized into spurious directions.
    if (s.norm() > 1e-12 * scale_of(x)) sym.push_back(s);
    if (a.norm() > 1e-12 * scale_of(x)) antisym.push_back(a);
  }
  CartanSplit split;
  split.k_basis = orthonormalize<double>(antisym);
  split.p_basis = orthonormalize<double>(sym);
  split.dim_g = alg.dim();
  if (static_cast<int>(split.k_basis.size() + split.p_basis.size()) != alg.dim()) {
    throw Error("liealg", "not compatible: dim k + dim p != dim g");
  }
  return split;
}

Vector p_coords(const CartanSplit& split, const Matrix& x) {
  Vector c(static_cast<Eigen::Index>(split.p_basis.size()));
  for (std::size_t j = 0; j < split.p_basis.size(); ++j) {
    c(static_cast<Eigen::Index>(j)) = frobenius(split.p_basis[j], x);
  }
  return c;
}

double p_residual(const CartanSplit& split, const Matrix& x) {
  return span_residual<double>(x, split.p_basis);
}

Matrix AbelianSlice::element(const Vector& v) const {
  if (a_basis.empty()) return Matrix();
  Matrix h = Matrix::Zero(a_basis.front().rows(), a_basis.front().cols());
  for (std::size_t i = 0; i < a_basis.size(); ++i) h += v(static_cast<Eigen::Index>(i)) * a_basis[i];
  return h;
}

Vector AbelianSlice::coords(const Matrix& h) const {
  Vector c(rank());
  for (int i = 0; i < rank(); ++i) c(i) = trace_form(a_basis[static_cast<std::size_t>(i)], h);
  return c;
}

Matrix centralizer_in_p(const CartanSplit& split, const MatrixList& elements) {
  const auto dp = static_cast<Eigen::Index>(split.p_basis.size());
  if (dp == 0) return Matrix(0, 0);
  const Eigen::Index n = split.p_basis.front().rows();
  Matrix system(static_cast<Eigen::Index>(elements.size()) * n * n, dp);
  for (Eigen::Index j = 0; j < dp; ++j) {
    for (std::size_t e = 0; e < elements.size(); ++e) {
      const Matrix b = bracket(split.p_basis[static_cast<std::size_t>(j)], elements[e]);
      system.block(static_cast<Eigen::Index>(e) * n * n, j, n * n, 1) = flatten<double>(b);
    }
  }
  if (elements.empty()) return Matrix::Identity(dp, dp);
  return null_space<double>(system, 1e-9);
}

namespace {

using Picker = std::function<Vector(const Matrix& centralizer, const Matrix& current)>;

AbelianSlice grow_abelian(const CartanSplit& split, Vector start, const Picker& pick) {
  const auto dp = static_cast<Eigen::Index>(split.p_basis.size());
  if (dp == 0) throw Error("liealg", "compact group: p = 0");
  Matrix a(dp, 1);
  a.col(0) = start.normalized();
  auto materialize = [&] {
    MatrixList out;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      Matrix h = Matrix::Zero(split.p_basis.front().rows(), split.p_basis.front().cols());
      for (Eigen::Index j = 0; j < dp; ++j) h += a(j, c) * split.p_basis[static_cast<std::size_t>(j)];
      out.push_back(h);
    }
    return out;
  };
  for (Eigen::Index iter = 0; iter <= dp; ++iter) {
    const MatrixList current = materialize();
    const Matrix centralizer = centralizer_in_p(split, current);
    if (centralizer.cols() <= a.cols()) {
      AbelianSlice slice;
      slice.a_basis = current;
      return slice;
    }
    Vector v = pick(centralizer, a);
    for (int pass = 0; pass < 2; ++pass) v -= a * (a.transpose() * v);
    a.conservativeResize(Eigen::NoChange, a.cols() + 1);
    a.col(a.cols() - 1) = v.normalized();
  }
  throw Error("liealg", "maximal_abelian: centralizer did not stabilize within dim p steps");
}

}  // namespace

AbelianSlice maximal_abelian(const CartanSplit& split, std::uint64_t seed) {
  const auto dp = static_cast<Eigen::Index>(split.p_basis.size());
  if (dp == 0) throw Error("liealg", "compact group: p = 0");
  Rng rng(seed);
  Picker pick = [&rng](const Matrix& c, const Matrix& a) {
    for (;;) {
      Vector v = c * rng.normal_vector(c.cols());
      v -= a * (a.transpose() * v);
      if (v.norm() > 1e-6) return v;
    }
  };
  return grow_abelian(split, rng.normal_vector(dp), pick);
}

AbelianSlice canonical_abelian(const CartanSplit& split) {
  const auto dp = static_cast<Eigen::Index>(split.p_basis.size());
  if (dp == 0) throw Error("liealg", "compact group: p = 0");
  Picker pick = [dp](const Matrix& c, const Matrix& a) {
    for (Eigen::Index j = 0; j < dp; ++j) {
      Vector v = c * c.row(j).transpose();
      v -= a * (a.transpose() * v);
      if (v.norm() > 1e-6) return v;
    }
    throw Error("liealg", "canonical_abelian: no centralizer direction found");
  };
  return grow_abelian(split, Vector::Unit(dp, 0), pick);
}

Matrix ad_matrix(const LieAlgebraRep& alg, const Matrix& h) {
  const int d = alg.dim();
  Matrix m(d, d);
  for (int j = 0; j < d; ++j) {
    const Matrix b = bracket(h, alg.frame[static_cast<std::size_t>(j)]);
    for (int i = 0; i < d; ++i) m(i, j) = frobenius(alg.frame[static_cast<std::size_t>(i)], b);
  }
  return m;
}

bool RestrictedRootSystem::is_positive(int root_index) const {
  return std::find(positive.begin(), positive.end(), root_index) != positive.end();
}

Vector RestrictedRootSystem::simple_coefficients(const Vector& v) const {
  Matrix base(rank(), num_simple());
  for (int i = 0; i < num_simple(); ++i) base.col(i) = simple_root(i);
  return base.colPivHouseholderQr().solve(v);
}

int RestrictedRootSystem::find_root(const Vector& v, double tol) const {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if ((roots[i] - v).cwiseAbs().maxCoeff() <= tol) return static_cast<int>(i);
  }
  return -1;
}

RestrictedRootSystem restricted_roots(const LieAlgebraRep& alg, const AbelianSlice& a,
                                      double tol) {
  const int r = a.rank();
  if (r == 0) throw Error("liealg", "restricted_roots: empty abelian slice");
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      if (max_abs(bracket(a.a_basis[static_cast<std::size_t>(i)], a.a_basis[static_cast<std::size_t>(j)])) > tol) {
        throw Error("liealg", "restricted_roots: slice is not abelian");
      }
    }
  }

  MatrixList family;
  for (const auto& h : a.a_basis) {
    Matrix m = ad_matrix(alg, h);
    // ad(h) must map the frame back into g.
    for (int j = 0; j < alg.dim(); ++j) {
      const Matrix b = bracket(h, alg.frame[static_cast<std::size_t>(j)]);
      if (alg.residual(b) > tol * scale_of(b)) {
        throw Error("liealg", "restricted_roots: ad(a) does not preserve g");
      }
    }
    family.push_back((m + m.transpose()) / 2);
  }
  const auto joint = simultaneous_eigen<double>(family, tol, alg.dim());

  const double merge_tol = 1e3 * tol;
  std::vector<Vector> values;
  std::vector<std::vector<Matrix>> spaces;
  Matrix zero(alg.dim(), 0);
  Eigen::Index col = 0;
  for (Eigen::Index size : joint.block_sizes) {
    const Vector& v = joint.joint_values[static_cast<std::size_t>(col)];
    const Matrix block = joint.basis.middleCols(col, size);
    col += size;
    if (v.cwiseAbs().maxCoeff() <= merge_tol) {
      zero.conservativeResize(Eigen::NoChange, zero.cols() + size);
      zero.rightCols(size) = block;
      continue;
    }
    bool merged = false;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if ((values[k] - v).cwiseAbs().maxCoeff() <= merge_tol) {
        spaces[k].push_back(block);
        merged = true;
        break;
      }
    }
    if (!merged) {
      values.push_back(v);
      spaces.push_back({block});
    }
  }

  RestrictedRootSystem rs;
  rs.a_basis = a.a_basis;
  rs.zero_space = zero;
  rs.regular_functional.resize(r);
  for (int i = 0; i < r; ++i) rs.regular_functional(i) = std::pow(kPositivityEpsilon, i);

  std::vector<std::size_t> pos, neg;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double pairing = values[k].dot(rs.regular_functional);
    if (std::abs(pairing) <= 1e-12 * values[k].norm()) {
      throw Error("liealg", "restricted_roots: regular functional is singular on a root");
    }
    (pairing > 0 ? pos : neg).push_back(k);
  }
  std::stable_sort(pos.begin(), pos.end(), [&](std::size_t x, std::size_t y) {
    return values[x].dot(rs.regular_functional) > values[y].dot(rs.regular_functional);
  });
  if (pos.size() != neg.size()) throw Error("liealg", "restricted_roots: roots not in +/- pairs");

  auto push_root = [&](std::size_t k) {
    rs.roots.push_back(values[k]);
    Matrix space = hstack(spaces[k], alg.dim());
    rs.root_space_dims.push_back(static_cast<int>(space.cols()));
    rs.root_spaces.push_back(std::move(space));
  };
  for (std::size_t k : pos) push_root(k);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const std::size_t k = pos[i];
    auto it = std::find_if(neg.begin(), neg.end(), [&](std::size_t m) {
      return (values[m] + values[k]).cwiseAbs().maxCoeff() <= merge_tol;
    });
    if (it == neg.end()) throw Error("liealg", "restricted_roots: negative of a root is missing");
    if (hstack(spaces[*it], alg.dim()).cols() != rs.root_space_dims[i]) {
      throw Error("liealg", "restricted_roots: +/- root spaces differ in dimension");
    }
    push_root(*it);
  }
  const int np = static_cast<int>(pos.size());
  for (int i = 0; i < np; ++i) rs.positive.push_back(i);

  // Base: positive roots that are not a sum of two positive roots.
  for (int i = 0; i < np; ++i) {
    const Vector& alpha = rs.roots[static_cast<std::size_t>(i)];
    bool decomposable = false;
    for (int j = 0; j < np && !decomposable; ++j) {
      for (int k = j; k < np && !decomposable; ++k) {
        const Vector diff = alpha - rs.roots[static_cast<std::size_t>(j)] - rs.roots[static_cast<std::size_t>(k)];
        decomposable = diff.norm() <= 1e-6 * alpha.norm();
      }
    }
    if (!decomposable) rs.simple.push_back(i);
  }
  if (rs.num_simple() != r) {
    std::ostringstream msg;
    msg << "restricted_roots: base has " << rs.num_simple() << " roots, rank is " << r;
    throw Error("liealg", msg.str());
  }
  for (int i = 0; i < np; ++i) {
    const Vector c = rs.simple_coefficients(rs.roots[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      if (c(j) < -1e-6 || std::abs(c(j) - std::round(c(j))) > 1e-6) {
        throw Error("liealg", "restricted_roots: positive root is not a nonnegative integer "
                              "combination of the base");
      }
    }
  }
  return rs;
}

Matrix reflection(const Vector& alpha) {
  const Eigen::Index r = alpha.size();
  return Matrix::Identity(r, r) - 2.0 * alpha * alpha.transpose() / alpha.squaredNorm();
}

WeylGroup generate_group(const std::vector<Matrix>& generators, int dim, double tol,
                         int max_order) {
  WeylGroup w;
  w.generators = generators;
  w.elements.push_back(Matrix::Identity(dim, dim));
  for (std::size_t head = 0; head < w.elements.size(); ++head) {
    for (const auto& s : generators) {
      Matrix candidate = s * w.elements[head];
      const bool known = std::any_of(w.elements.begin(), w.elements.end(), [&](const Matrix& e) {
        return (e - candidate).cwiseAbs().maxCoeff() <= tol;
      });
      if (known) continue;
      if (static_cast<int>(w.elements.size()) >= max_order) {
        throw Error("liealg", "group closure exceeds order bound " + std::to_string(max_order));
      }
      w.elements.push_back(std::move(candidate));
    }
  }
  return w;
}

WeylGroup weyl_group(const RestrictedRootSystem& rs, double tol, int max_order) {
  std::vector<Matrix> gens;
  for (int i = 0; i < rs.num_simple(); ++i) gens.push_back(reflection(rs.simple_root(i)));
  return generate_group(gens, rs.rank(), tol, max_order);
}

namespace {

void check_subset(const RestrictedRootSystem& rs, const SimpleSubset& subset) {
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= rs.num_simple()) {
      throw Error("liealg", "subset is not contained in the base");
    }
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      if (subset[i] == subset[j]) throw Error("liealg", "subset lists a simple root twice");
    }
  }
}

Matrix subset_matrix(const RestrictedRootSystem& rs, const SimpleSubset& subset) {
  Matrix m(rs.rank(), static_cast<Eigen::Index>(subset.size()));
  for (std::size_t i = 0; i < subset.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = rs.simple_root(subset[i]);
  return m;
}

}  // namespace

std::vector<int> roots_in_span(const RestrictedRootSystem& rs, const SimpleSubset& subset) {
  check_subset(rs, subset);
  std::vector<int> out;
  if (subset.empty()) return out;
  const Matrix span = range_basis<double>(subset_matrix(rs, subset));
  for (std::size_t k = 0; k < rs.roots.size(); ++k) {
    const Vector& v = rs.roots[k];
    if ((v - span * (span.transpose() * v)).norm() <= 1e-8 * v.norm()) out.push_back(static_cast<int>(k));
  }
  return out;
}

double subspace_excess(const Matrix& inner, const Matrix& outer) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < inner.cols(); ++j) {
    const Vector c = inner.col(j);
    const Vector r = outer.cols() ? Vector(c - outer * (outer.transpose() * c)) : c;
    worst = std::max(worst, r.norm());
  }
  return worst;
}

double bracket_closure_residual(const LieAlgebraRep& alg, const Matrix& basis) {
  const MatrixList elems = alg.elements(basis);
  double worst = 0.0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      const Matrix b = bracket(elems[i], elems[j]);
      const Vector c = alg.coords(b);
      const Vector r = c - basis * (basis.transpose() * c);
      worst = std::max({worst, r.norm(), alg.residual(b)});
    }
  }
  return worst;
}

ParabolicData parabolic_from_subset(const LieAlgebraRep& alg, const RestrictedRootSystem& rs,
                                    const SimpleSubset& subset, double tol) {
  check_subset(rs, subset);
  const std::vector<int> delta_i = roots_in_span(rs, subset);
  auto in_delta_i = [&](int k) { return std::find(delta_i.begin(), delta_i.end(), k) != delta_i.end(); };

  std::vector<Matrix> q_blocks{rs.zero_space}, n_blocks, nminus_blocks, levi_roots;
  for (std::size_t k = 0; k < rs.roots.size(); ++k) {
    const int idx = static_cast<int>(k);
    const bool pos = rs.is_positive(idx);
    const bool inside = in_delta_i(idx);
    if (pos || inside) q_blocks.push_back(rs.root_spaces[k]);
    if (pos && !inside) n_blocks.push_back(rs.root_spaces[k]);
    if (!pos && !inside) nminus_blocks.push_back(rs.root_spaces[k]);
    if (inside) levi_roots.push_back(rs.root_spaces[k]);
  }

  ParabolicData out;
  out.subset = subset;
  out.q = hstack(q_blocks, alg.dim());
  out.n = hstack(n_blocks, alg.dim());
  out.n_minus = hstack(nminus_blocks, alg.dim());

  const Matrix simple_i = subset_matrix(rs, subset);
  out.a_upper = range_basis<double>(simple_i);
  out.a_lower = subset.empty() ? Matrix(Matrix::Identity(rs.rank(), rs.rank()))
                               : null_space<double>(Matrix(simple_i.transpose()));

  Matrix a_frame(alg.dim(), rs.rank());
  for (int i = 0; i < rs.rank(); ++i) a_frame.col(i) = alg.coords(rs.a_basis[static_cast<std::size_t>(i)]);
  Matrix m_frame = rs.zero_space - a_frame * (a_frame.transpose() * rs.zero_space);
  m_frame = range_basis<double>(m_frame);
  const Matrix a_upper_frame = a_frame * out.a_upper;
  std::vector<Matrix> m_blocks{m_frame, a_upper_frame};
  for (auto& b : levi_roots) m_blocks.push_back(b);
  out.m = hstack(m_blocks, alg.dim());

  const Eigen::Index total = out.m.cols() + out.a_lower.cols() + out.n.cols();
  if (total != out.q.cols()) {
    throw Error("liealg", "parabolic_from_subset: m_I + a_I + n_I does not match q_I");
  }
  if (out.q.cols() + out.n_minus.cols() != alg.dim()) {
    throw Error("liealg", "parabolic_from_subset: q_I + n_I^- does not fill g");
  }
  const double closure = bracket_closure_residual(alg, out.q);
  if (closure > tol * 10) {
    throw Error("liealg", "parabolic_from_subset: q_I not closed under bracket (residual " +
                              std::to_string(closure) + ")");
  }
  return out;
}

BetaParabolic parabolic_from_beta(const LieAlgebraRep& alg, const CartanSplit& split,
                                  const Matrix& beta, double tol) {
  if (p_residual(split, beta) > 1e-9 * scale_of(beta)) {
    throw Error("liealg", "parabolic_from_beta: beta is not in p");
  }
  Matrix ad = ad_matrix(alg, beta);
  ad = (ad + ad.transpose()) / 2;
  const auto ed = sym_eigen<double>(ad, tol);
  std::vector<Matrix> q_blocks, r_blocks;
  for (std::size_t c = 0; c < ed.clusters(); ++c) {
    if (ed.values[c] > -tol) q_blocks.push_back(ed.vectors[c]);
    if (ed.values[c] > tol) r_blocks.push_back(ed.vectors[c]);
  }
  BetaParabolic out{hstack(q_blocks, alg.dim()), hstack(r_blocks, alg.dim())};
  if (bracket_closure_residual(alg, out.q) > tol * 10 || bracket_closure_residual(alg, out.r) > tol * 10) {
    throw Error("liealg", "parabolic_from_beta: eigenspace sums not closed under bracket");
  }
  return out;
}

Vector beta_for_subset(const RestrictedRootSystem& rs, const SimpleSubset& subset) {
  check_subset(rs, subset);
  const int r = rs.rank();
  Matrix base(r, r);
  Vector target = Vector::Ones(r);
  for (int i = 0; i < r; ++i) base.row(i) = rs.simple_root(i).transpose();
  for (int i : subset) target(i) = 0.0;
  const Vector beta = base.colPivHouseholderQr().solve(target);

  const std::vector<int> delta_i = roots_in_span(rs, subset);
  for (int k : rs.positive) {
    const double pairing = rs.roots[static_cast<std::size_t>(k)].dot(beta);
    const bool inside = std::find(delta_i.begin(), delta_i.end(), k) != delta_i.end();
    if (inside ? std::abs(pairing) > 1e-9 : pairing <= 1e-9) {
      throw Error("liealg", "beta_for_subset: root pairings do not cut out q_I");
    }
  }
  return beta;
}

}  // namespace orbitope
