#include "orbitope/repspace.hpp"

#include "orbitope/faceatlas.hpp"

#include <algorithm>
#include <map>

namespace orbitope {

std::vector<std::vector<int>> monomial_exponents(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(n), 0);
  // Fill position `i` with every admissible exponent, largest first.
  auto fill = [&](auto&& self, int i, int remaining) -> void {
    if (i == n - 1) {
      current[static_cast<std::size_t>(i)] = remaining;
      out.push_back(current);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      current[static_cast<std::size_t>(i)] = e;
      self(self, i + 1, remaining - e);
    }
  };
  if (n > 0 && k >= 0) fill(fill, 0, k);
  return out;
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double monomial_scale(const std::vector<int>& m, int k) {
  double log_value = std::lgamma(k + 1.0);
  for (int e : m) log_value -= std::lgamma(e + 1.0);
  return std::exp(0.5 * log_value);
}

InducedRep finish(std::vector<Matrix> images) {
  InducedRep out;
  const auto dim = images.front().rows();
  for (auto& m : images) {
    const double tr = m.trace();
    out.trace_removed = std::max(out.trace_removed, std::abs(tr));
    m.diagonal().array() -= tr / static_cast<double>(dim);
  }
  out.alg = make_algebra(static_cast<int>(dim), std::move(images));
  return out;
}

}  // namespace

InducedRep sym_power_rep(const LieAlgebraRep& alg, int k, int max_dim) {
  if (k < 1) throw Error("repspace", "sym_power_rep: degree must be at least 1");
  const int n = alg.n;
  const double dim = binomial(n + k - 1, k);
  if (dim > max_dim) {
    throw Error("repspace", "sym_power_rep: dimension " + std::to_string(static_cast<long long>(dim)) +
                                " exceeds cap " + std::to_string(max_dim));
  }
  const auto basis = monomial_exponents(n, k);
  std::map<std::vector<int>, Eigen::Index> position;
  std::vector<double> scale;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    position[basis[i]] = static_cast<Eigen::Index>(i);
    scale.push_back(monomial_scale(basis[i], k));
  }
  const auto big_n = static_cast<Eigen::Index>(basis.size());

  std::vector<Matrix> images;
  for (const auto& x : alg.generators) {
    Matrix img = Matrix::Zero(big_n, big_n);
    for (Eigen::Index col = 0; col < big_n; ++col) {
      const auto& m = basis[static_cast<std::size_t>(col)];
      for (int j = 0; j < n; ++j) {
        if (m[static_cast<std::size_t>(j)] == 0) continue;
        for (int i = 0; i < n; ++i) {
          if (x(i, j) == 0.0) continue;
          auto target = m;
          --target[static_cast<std::size_t>(j)];
          ++target[static_cast<std::size_t>(i)];
          const Eigen::Index row = position.at(target);
          img(row, col) += x(i, j) * m[static_cast<std::size_t>(j)] *
                           scale[static_cast<std::size_t>(col)] / scale[static_cast<std::size_t>(row)];
        }
      }
    }
    images.push_back(std::move(img));
  }
  return finish(std::move(images));
}

InducedRep adjoint_rep(const LieAlgebraRep& alg) {
  std::vector<Matrix> images;
  for (const auto& x : alg.generators) images.push_back(ad_matrix(alg, x));
  return finish(std::move(images));
}

std::vector<int> WeightData::multiplicities() const {
  std::vector<int> out;
  for (const auto& s : weight_spaces) out.push_back(static_cast<int>(s.cols()));
  return out;
}

int highest_weight(const std::vector<Vector>& weights, const RestrictedRootSystem& rs) {
  if (weights.empty()) throw Error("repspace", "highest_weight: no weights");
  int best = 0;
  double best_value = weights[0].dot(rs.regular_functional);
  for (std::size_t i = 1; i < weights.size(); ++i) {
    const double v = weights[i].dot(rs.regular_functional);
    if (v > best_value) {
      best = static_cast<int>(i);
      best_value = v;
    }
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (static_cast<int>(i) == best) continue;
    if (std::abs(weights[i].dot(rs.regular_functional) - best_value) <= 1e-9) {
      throw Error("repspace", "degenerate positivity: highest weight is not unique");
    }
  }
  const Vector& mu = weights[static_cast<std::size_t>(best)];
  for (int i = 0; i < rs.num_simple(); ++i) {
    if (mu.dot(rs.simple_root(i)) < -1e-9) {
      throw Error("repspace", "highest weight is not dominant");
    }
  }
  return best;
}

WeightData weights(const LieAlgebraRep& alg, const AbelianSlice& a, const RestrictedRootSystem& rs,
                   double tol) {
  if (!irreducible_on(alg.generators, Matrix::Identity(alg.n, alg.n))) {
    throw Error("repspace", "weights: representation is not irreducible");
  }
  const auto joint = simultaneous_eigen<double>(a.a_basis, tol, alg.n);

  const double merge_tol = 1e3 * tol;
  WeightData wd;
  Eigen::Index col = 0;
  for (Eigen::Index size : joint.block_sizes) {
    const Vector& v = joint.joint_values[static_cast<std::size_t>(col)];
    const Matrix block = joint.basis.middleCols(col, size);
    col += size;
    auto it = std::find_if(wd.weights.begin(), wd.weights.end(), [&](const Vector& w) {
      return (w - v).cwiseAbs().maxCoeff() <= merge_tol;
    });
    if (it == wd.weights.end()) {
      wd.weights.push_back(v);
      wd.weight_spaces.push_back(block);
    } else {
      auto& space = wd.weight_spaces[static_cast<std::size_t>(it - wd.weights.begin())];
      Matrix merged(space.rows(), space.cols() + block.cols());
      merged << space, block;
      space = merged;
    }
  }

  // Order by decreasing pairing with the regular functional.
  std::vector<std::size_t> order(wd.weights.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return wd.weights[x].dot(rs.regular_functional) > wd.weights[y].dot(rs.regular_functional);
  });
  WeightData sorted;
  for (std::size_t i : order) {
    sorted.weights.push_back(wd.weights[i]);
    sorted.weight_spaces.push_back(wd.weight_spaces[i]);
  }

  sorted.highest_index = highest_weight(sorted.weights, rs);
  const Matrix& top = sorted.weight_spaces[static_cast<std::size_t>(sorted.highest_index)];
  if (top.cols() != 1) {
    throw Error("repspace", "reducible or wrong positivity: highest weight space has dimension " +
                                std::to_string(top.cols()));
  }
  sorted.mu_rho = sorted.highest();
  sorted.v_rho = top.col(0).normalized();
  canonicalize_sign(sorted.v_rho);
  return sorted;
}

}  // namespace orbitope
