#include "orbitope/convgeo.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace orbitope {

namespace {

struct AffineFrame {
  Vector center;
  Matrix basis;       // ambient x d
  Matrix complement;  // ambient x (ambient - d)
};

AffineFrame affine_frame(std::span<const Vector> points) {
  const Eigen::Index amb = points.front().size();
  AffineFrame f;
  f.center = Vector::Zero(amb);
  for (const auto& p : points) f.center += p;
  f.center /= static_cast<double>(points.size());
  Matrix diffs(amb, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) diffs.col(static_cast<Eigen::Index>(i)) = points[i] - f.center;
  Eigen::JacobiSVD<Matrix> svd(diffs, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double cut = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index d = 0;
  while (d < sv.size() && sv(d) > cut) ++d;
  f.basis = svd.matrixU().leftCols(d);
  f.complement = svd.matrixU().rightCols(amb - d);
  return f;
}

bool same_halfspace(const Halfspace& a, const Halfspace& b) {
  return (a.normal - b.normal).cwiseAbs().maxCoeff() <= 1e-7 && std::abs(a.offset - b.offset) <= 1e-7;
}

// Calls fn on every k-subset of {0..n-1}, in lexicographic order.
template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k > n) return;
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

double Polytope::support(const Vector& u) const {
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) h = std::max(h, v.dot(u));
  return h;
}

double Polytope::violation(const Vector& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& f : facets) worst = std::max(worst, x.dot(f.normal) - f.offset);
  for (const auto& e : equations) worst = std::max(worst, std::abs(x.dot(e.normal) - e.offset));
  if (facets.empty() && equations.empty() && !vertices.empty()) worst = (x - vertices.front()).norm();
  return std::max(worst, 0.0);
}

int affine_dimension(std::span<const Vector> points) {
  if (points.empty()) return -1;
  return static_cast<int>(affine_frame(points).basis.cols());
}

Polytope hull(std::span<const Vector> points, const HullOptions& options) {
  if (points.empty()) throw Error("convgeo", "hull: no points");
  const Eigen::Index amb = points.front().size();
  if (amb > options.max_dim) {
    throw Error("convgeo", "hull: ambient dimension " + std::to_string(amb) + " exceeds cap " +
                               std::to_string(options.max_dim));
  }
  std::vector<Vector> pts;
  for (const auto& p : points) {
    if (p.size() != amb) throw DimensionError("convgeo", "hull: points of mixed dimension");
    const bool dup = std::any_of(pts.begin(), pts.end(), [&](const Vector& q) {
      return (q - p).cwiseAbs().maxCoeff() <= options.dedup;
    });
    if (!dup) pts.push_back(p);
  }
  if (static_cast<int>(pts.size()) > options.max_points) {
    throw Error("convgeo", "hull: " + std::to_string(pts.size()) + " points exceed cap " +
                               std::to_string(options.max_points));
  }

  const AffineFrame frame = affine_frame(pts);
  const auto d = static_cast<int>(frame.basis.cols());
  const int count = static_cast<int>(pts.size());
  Polytope poly;
  poly.ambient_dim = static_cast<int>(amb);
  poly.dim = d;
  for (Eigen::Index j = 0; j < frame.complement.cols(); ++j) {
    const Vector w = frame.complement.col(j);
    poly.equations.push_back({w, w.dot(frame.center)});
  }
  std::vector<Vector> local;
  for (const auto& p : pts) local.push_back(frame.basis.transpose() * (p - frame.center));

  std::vector<Halfspace> facets;  // in local coordinates
  if (d == 0) {
    poly.vertices.push_back(pts.front());
    return poly;
  }
  if (d == 1) {
    Vector plus = Vector::Ones(1);
    Halfspace up{plus, -std::numeric_limits<double>::infinity()};
    Halfspace down{-plus, -std::numeric_limits<double>::infinity()};
    for (const auto& y : local) {
      up.offset = std::max(up.offset, y(0));
      down.offset = std::max(down.offset, -y(0));
    }
    facets = {up, down};
  } else {
    for_each_subset(count, d, [&](const std::vector<int>& idx) {
      Matrix edges(d - 1, d);
      for (int k = 1; k < d; ++k) {
        edges.row(k - 1) = (local[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])] -
                            local[static_cast<std::size_t>(idx[0])]).transpose();
      }
      const Matrix kernel = null_space<double>(edges, 1e-9);
      if (kernel.cols() != 1) return;
      const Vector n = kernel.col(0).normalized();
      const double b = n.dot(local[static_cast<std::size_t>(idx[0])]);
      bool below = true, above = true;
      for (const auto& y : local) {
        const double s = n.dot(y) - b;
        below = below && s <= options.tight;
        above = above && s >= -options.tight;
      }
      auto add = [&](const Halfspace& h) {
        const bool known = std::any_of(facets.begin(), facets.end(),
                                       [&](const Halfspace& f) { return same_halfspace(f, h); });
        if (!known) facets.push_back(h);
      };
      if (below) add({n, b});
      if (above) add({-n, -b});
    });
  }

  // A point is a vertex iff the facets tight at it have normals of full rank.
  for (int j = 0; j < count; ++j) {
    std::vector<Vector> tight_normals;
    for (const auto& f : facets) {
      if (std::abs(f.normal.dot(local[static_cast<std::size_t>(j)]) - f.offset) <= options.tight) {
        tight_normals.push_back(f.normal);
      }
    }
    if (static_cast<int>(tight_normals.size()) < d) continue;
    Matrix stacked(static_cast<Eigen::Index>(tight_normals.size()), d);
    for (std::size_t r = 0; r < tight_normals.size(); ++r) stacked.row(static_cast<Eigen::Index>(r)) = tight_normals[r].transpose();
    if (null_space<double>(stacked, 1e-9).cols() == 0) poly.vertices.push_back(pts[static_cast<std::size_t>(j)]);
  }
  for (const auto& f : facets) {
    const Vector n = frame.basis * f.normal;
    poly.facets.push_back({n, f.offset + n.dot(frame.center)});
  }
  return poly;
}

std::pair<double, FaceDescriptor> support_face(const Polytope& p, const Vector& u, double tight) {
  if (u.size() != p.ambient_dim) throw DimensionError("convgeo", "support_face: dimension mismatch");
  if (u.norm() == 0.0) throw Error("convgeo", "support_face: zero direction");
  const double h = p.support(u);
  FaceDescriptor face;
  face.supporting_normal = u;
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    if (p.vertices[i].dot(u) >= h - tight) {
      face.vertex_indices.push_back(static_cast<int>(i));
      pts.push_back(p.vertices[i]);
    }
  }
  face.dim = affine_dimension(pts);
  return {h, face};
}

std::vector<FaceDescriptor> face_lattice(const Polytope& p, double tight) {
  const int nv = static_cast<int>(p.vertices.size());
  std::vector<std::vector<int>> facet_sets;
  for (const auto& f : p.facets) {
    std::vector<int> s;
    for (int i = 0; i < nv; ++i) {
      if (std::abs(p.vertices[static_cast<std::size_t>(i)].dot(f.normal) - f.offset) <= tight) s.push_back(i);
    }
    facet_sets.push_back(std::move(s));
  }

  std::vector<int> whole(static_cast<std::size_t>(nv));
  for (int i = 0; i < nv; ++i) whole[static_cast<std::size_t>(i)] = i;
  std::set<std::vector<int>> seen{whole};
  std::vector<std::vector<int>> queue;
  for (const auto& s : facet_sets) {
    if (!s.empty() && seen.insert(s).second) queue.push_back(s);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (const auto& s : facet_sets) {
      std::vector<int> cut;
      std::set_intersection(queue[head].begin(), queue[head].end(), s.begin(), s.end(),
                            std::back_inserter(cut));
      if (!cut.empty() && seen.insert(cut).second) queue.push_back(cut);
    }
  }

  std::vector<FaceDescriptor> faces;
  for (const auto& s : seen) {
    FaceDescriptor face;
    face.vertex_indices = s;
    face.supporting_normal = Vector::Zero(p.ambient_dim);
    if (s.size() != whole.size()) {
      for (std::size_t k = 0; k < facet_sets.size(); ++k) {
        if (std::includes(facet_sets[k].begin(), facet_sets[k].end(), s.begin(), s.end())) {
          face.supporting_normal += p.facets[k].normal;
        }
      }
    }
    std::vector<Vector> pts;
    for (int i : s) pts.push_back(p.vertices[static_cast<std::size_t>(i)]);
    face.dim = affine_dimension(pts);
    faces.push_back(std::move(face));
  }
  std::stable_sort(faces.begin(), faces.end(), [](const FaceDescriptor& a, const FaceDescriptor& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertex_indices < b.vertex_indices;
  });
  return faces;
}

bool polytope_equal(const Polytope& a, const Polytope& b, double tol) {
  if (a.ambient_dim != b.ambient_dim) return false;
  auto covered = [tol](const Polytope& x, const Polytope& y) {
    return std::all_of(x.vertices.begin(), x.vertices.end(), [&](const Vector& v) {
      return std::any_of(y.vertices.begin(), y.vertices.end(),
                         [&](const Vector& w) { return (v - w).norm() <= tol; });
    });
  };
  if (!covered(a, b) || !covered(b, a)) return false;
  std::vector<Vector> directions;
  for (const Polytope* poly : {&a, &b}) {
    for (const auto& f : poly->facets) directions.push_back(f.normal);
    for (const auto& e : poly->equations) {
      directions.push_back(e.normal);
      directions.push_back(-e.normal);
    }
  }
  return std::all_of(directions.begin(), directions.end(), [&](const Vector& u) {
    return std::abs(a.support(u) - b.support(u)) <= tol;
  });
}

std::vector<Vector> weyl_orbit(const WeylGroup& w, const Vector& v, double dedup) {
  std::vector<Vector> orbit;
  for (const auto& e : w.elements) {
    Vector image = e * v;
    const bool dup = std::any_of(orbit.begin(), orbit.end(), [&](const Vector& q) {
      return (q - image).cwiseAbs().maxCoeff() <= dedup;
    });
    if (!dup) orbit.push_back(std::move(image));
  }
  return orbit;
}

Polytope weyl_orbit_polytope(const WeylGroup& w, const Vector& v, double dedup) {
  const auto orbit = weyl_orbit(w, v, dedup);
  HullOptions options;
  options.dedup = dedup;
  return hull(orbit, options);
}

int find_vertex(const Polytope& p, const Vector& x, double tol) {
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    if ((p.vertices[i] - x).norm() <= tol) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace orbitope
