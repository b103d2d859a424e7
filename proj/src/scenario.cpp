#include "orbitope/scenario.hpp"

#include "orbitope/faceatlas.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace orbitope {

using ojson = nlohmann::ordered_json;

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"roots", "weights", "polytope", "faces",
                                              "atlas", "flow",    "normflow", "strata"};
  return names;
}

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double* tolerance_slot(Tolerances& tol, const std::string& key) {
  if (key == "cluster") return &tol.cluster;
  if (key == "membership") return &tol.membership;
  if (key == "span") return &tol.span;
  if (key == "dedup") return &tol.dedup;
  if (key == "tight") return &tol.tight;
  if (key == "orthogonal") return &tol.orthogonal;
  if (key == "grad") return &tol.grad;
  if (key == "strata") return &tol.strata;
  return nullptr;
}

void set_tolerance(Tolerances& tol, const std::string& key, double value) {
  double* slot = tolerance_slot(tol, key);
  if (!slot) throw InputError("unknown tolerance '" + key + "'");
  if (!(value > 0.0) || !std::isfinite(value)) throw InputError("tolerance '" + key + "' must be positive");
  *slot = value;
}

RepresentationSpec parse_representation(const nlohmann::json& j) {
  RepresentationSpec rep;
  if (j.is_string()) {
    rep.kind = j.get<std::string>();
  } else if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (key == "kind") {
        if (!value.is_string()) throw InputError("representation.kind must be a string");
        rep.kind = value.get<std::string>();
      } else if (key == "k") {
        if (!value.is_number_integer()) throw InputError("representation.k must be an integer");
        rep.k = value.get<int>();
      } else {
        throw InputError("unknown representation field '" + key + "'");
      }
    }
  } else {
    throw InputError("representation must be a string or an object");
  }
  if (rep.kind != "standard" && rep.kind != "sym_power" && rep.kind != "adjoint") {
    throw InputError("unknown representation kind '" + rep.kind + "'");
  }
  if (rep.kind == "sym_power" && rep.k < 1) throw InputError("representation.k must be at least 1");
  if (rep.kind != "sym_power") rep.k = 1;
  return rep;
}

Matrix parse_matrix(const nlohmann::json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw InputError("generator must be an n x n array");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n) throw InputError("generator must be an n x n array");
    for (int k = 0; k < n; ++k) {
      if (!row[static_cast<std::size_t>(k)].is_number()) throw InputError("generator entries must be numbers");
      m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return m;
}

void parse_group(const nlohmann::json& j, Scenario& s, bool& rep_from_preset) {
  auto by_name = [&](const std::string& name) {
    const auto bases = base_names();
    if (std::find(bases.begin(), bases.end(), name) != bases.end()) {
      s.base = name;
      s.group_name = name;
      return;
    }
    for (const auto& p : presets()) {
      if (p.name == name) {
        s.base = p.base;
        s.rep = p.rep;
        s.group_name = name;
        rep_from_preset = true;
        return;
      }
    }
    throw InputError("unknown group '" + name + "'");
  };
  if (j.is_string()) {
    by_name(j.get<std::string>());
  } else if (j.is_object()) {
    if (j.contains("preset")) {
      if (!j["preset"].is_string() || j.size() != 1) throw InputError("group.preset must be the only group field");
      by_name(j["preset"].get<std::string>());
    } else if (j.contains("base")) {
      if (!j["base"].is_string() || j.size() != 1) throw InputError("group.base must be the only group field");
      by_name(j["base"].get<std::string>());
    } else {
      if (!j.contains("n") || !j["n"].is_number_integer()) throw InputError("group.n must be an integer");
      if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty()) {
        throw InputError("group.generators must be a nonempty array");
      }
      for (const auto& [key, value] : j.items()) {
        if (key != "n" && key != "generators") throw InputError("unknown group field '" + key + "'");
      }
      const int n = j["n"].get<int>();
      if (n < 2 || n > 16) throw InputError("group.n must lie in [2, 16]");
      for (const auto& g : j["generators"]) s.generators.push_back(parse_matrix(g, n));
      s.group_name = "custom";
    }
  } else {
    throw InputError("group must be a string or an object");
  }
  if (!s.base.empty()) s.generators = base_generators(s.base);
}

ojson num(double v) {
  if (!std::isfinite(v)) return ojson(nullptr);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;
  return ojson(r);
}

ojson vec(const Vector& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v(i)));
  return out;
}

ojson ints(const std::vector<int>& v) {
  ojson out = ojson::array();
  for (int x : v) out.push_back(x);
  return out;
}

struct Checks {
  ojson list = ojson::array();
  std::vector<std::string> failures;

  void add(const std::string& name, bool ok, const std::string& detail = {}) {
    ojson c;
    c["name"] = name;
    c["ok"] = ok;
    if (!detail.empty()) c["detail"] = detail;
    list.push_back(std::move(c));
    if (!ok) failures.push_back(name + (detail.empty() ? "" : ": " + detail));
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Every w maps the multiset (points, mult) onto itself.
bool weyl_invariant(const WeylGroup& w, const std::vector<Vector>& points, const std::vector<int>& mult,
                    double tol) {
  for (const auto& e : w.elements) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Vector image = e * points[i];
      bool found = false;
      for (std::size_t j = 0; j < points.size() && !found; ++j) {
        found = (points[j] - image).cwiseAbs().maxCoeff() <= tol && mult[j] == mult[i];
      }
      if (!found) return false;
    }
  }
  return true;
}

bool wants(const std::set<std::string>& tasks, const std::string& t) { return tasks.count(t) > 0; }

Matrix beta_matrix(const RestrictedRootSystem& rs, const Vector& coords) {
  Matrix b = Matrix::Zero(rs.a_basis.front().rows(), rs.a_basis.front().cols());
  for (int i = 0; i < rs.rank(); ++i) b += coords(i) * rs.a_basis[static_cast<std::size_t>(i)];
  return b;
}

ojson trace_summary(const FlowTrace& trace) {
  ojson out;
  out["steps"] = static_cast<int>(trace.size()) - 1;
  out["t_end"] = num(trace.times.back());
  out["value_start"] = num(trace.values.front());
  out["value_end"] = num(trace.values.back());
  out["x_end"] = vec(trace.points.back().rep());
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cli", "cannot write " + path.string());
  f << text;
  if (!f) throw Error("cli", "write failed for " + path.string());
}

// The task pipeline proper; throws orbitope::Error on numerical failures.
void execute(const Scenario& s, bool verify, const std::filesystem::path& out_dir, ojson& report, Checks& checks) {
  const Tolerances& tol = s.tol;
  const std::set<std::string> tasks(s.tasks.begin(), s.tasks.end());
  const bool need_weights = wants(tasks, "weights") || wants(tasks, "polytope") || wants(tasks, "faces") ||
                            wants(tasks, "atlas") || verify;
  const bool need_polytope = wants(tasks, "polytope") || wants(tasks, "faces") || wants(tasks, "atlas") || verify;

  const int n0 = static_cast<int>(s.generators.front().rows());
  const LieAlgebraRep base = make_algebra(n0, s.generators, tol.span);
  const LieAlgebraRep alg = build_representation(base, s.rep);
  const Pipeline p = make_pipeline(alg, tol.span);
  const RestrictedRootSystem& rs = p.rs;

  report["scenario"]["n"] = alg.n;
  report["scenario"]["dim_g"] = alg.dim();
  report["scenario"]["rank"] = rs.rank();

  {
    ojson roots;
    roots["dim_k"] = static_cast<int>(p.split.k_basis.size());
    roots["dim_p"] = static_cast<int>(p.split.p_basis.size());
    roots["zero_space_dim"] = rs.zero_space_dim();
    roots["count"] = static_cast<int>(rs.roots.size());
    roots["roots"] = ojson::array();
    for (std::size_t k = 0; k < rs.roots.size(); ++k) {
      ojson r;
      r["coords"] = vec(rs.roots[k]);
      r["multiplicity"] = rs.root_space_dims[k];
      r["positive"] = rs.is_positive(static_cast<int>(k));
      roots["roots"].push_back(std::move(r));
    }
    roots["simple"] = ints(rs.simple);
    roots["weyl_order"] = p.w.order();
    if (wants(tasks, "roots")) report["roots"] = roots;
    checks.add("roots.weyl_invariant", weyl_invariant(p.w, rs.roots, rs.root_space_dims, 1e3 * tol.dedup));
    int total = rs.zero_space_dim();
    for (int d : rs.root_space_dims) total += d;
    checks.add("roots.dimension_count", total == alg.dim(),
               std::to_string(total) + " vs dim g " + std::to_string(alg.dim()));
  }

  WeightData wd;
  if (need_weights) {
    wd = weights(alg, p.a, rs, tol.cluster);
    if (wants(tasks, "weights")) {
      ojson w;
      w["weights"] = ojson::array();
      for (std::size_t i = 0; i < wd.weights.size(); ++i) {
        ojson e;
        e["coords"] = vec(wd.weights[i]);
        e["multiplicity"] = static_cast<int>(wd.weight_spaces[i].cols());
        w["weights"].push_back(std::move(e));
      }
      w["highest_index"] = wd.highest_index;
      w["mu_rho"] = vec(wd.mu_rho);
      w["v_rho"] = vec(wd.v_rho);
      report["weights"] = w;
    }
    const auto mult = wd.multiplicities();
    int total = 0;
    for (int m : mult) total += m;
    checks.add("weights.dimension_count", total == alg.n);
    checks.add("weights.weyl_invariant", weyl_invariant(p.w, wd.weights, mult, 1e3 * tol.dedup));
  }

  Polytope poly;
  if (need_polytope) {
    poly = weyl_orbit_polytope(p.w, wd.mu_rho, tol.dedup);
    if (wants(tasks, "polytope")) {
      ojson pj;
      pj["dim"] = poly.dim;
      pj["vertices"] = ojson::array();
      for (const auto& v : poly.vertices) pj["vertices"].push_back(vec(v));
      pj["facets"] = ojson::array();
      for (const auto& f : poly.facets) {
        ojson fj;
        fj["normal"] = vec(f.normal);
        fj["offset"] = num(f.offset);
        pj["facets"].push_back(std::move(fj));
      }
      report["polytope"] = pj;
    }
    checks.add("polytope.mu_rho_is_vertex", find_vertex(poly, wd.mu_rho) >= 0);
    checks.add("polytope.vertices_form_orbit",
               poly.vertices.size() == weyl_orbit(p.w, wd.mu_rho, tol.dedup).size());
    double worst = 0.0;
    for (const auto& w : wd.weights) worst = std::max(worst, poly.violation(w));
    checks.add("polytope.contains_weights", worst <= 1e-8, "max violation " + fmt(worst));
  }

  if (wants(tasks, "faces")) {
    const auto faces = face_lattice(poly, tol.tight);
    ojson fj = ojson::array();
    std::vector<int> fvec(static_cast<std::size_t>(poly.dim + 1), 0);
    for (const auto& f : faces) {
      ojson e;
      e["dim"] = f.dim;
      e["vertices"] = ints(f.vertex_indices);
      e["normal"] = vec(f.supporting_normal);
      fj.push_back(std::move(e));
      if (f.dim >= 0 && f.dim <= poly.dim) ++fvec[static_cast<std::size_t>(f.dim)];
    }
    report["faces"]["f_vector"] = ints(fvec);
    report["faces"]["faces"] = fj;
    int euler = 0;
    for (std::size_t d = 0; d < fvec.size(); ++d) euler += (d % 2 ? -1 : 1) * fvec[d];
    checks.add("faces.euler_relation", euler == 1, "alternating sum " + std::to_string(euler));
  }

  if (wants(tasks, "atlas")) {
    const AtlasReport atlas = casselman_correspondence(rs, p.w, wd.mu_rho, poly);
    ojson aj;
    aj["matched"] = atlas.matched;
    aj["lattice_classes"] = atlas.lattice_classes;
    aj["classes"] = ojson::array();
    for (const auto& c : atlas.classes) {
      ojson e;
      e["subset"] = ints(c.subset.subset);
      e["saturation"] = ints(c.subset.saturation);
      e["y0"] = vec(c.subset.y0);
      e["y1"] = vec(c.subset.y1);
      e["face_dim"] = c.face.dim;
      e["face_vertices"] = ints(c.face.vertex_indices);
      e["representative"] = ints(c.representative);
      e["orbit_size"] = c.orbit_size;
      aj["classes"].push_back(std::move(e));
    }
    aj["diff"] = atlas.diff;
    aj["sandwich"] = ojson::array();
    bool all_ok = true;
    for (const auto& ms : enumerate_mu_connected(rs, wd.mu_rho, tol.orthogonal)) {
      const auto sw = sandwich_check(alg, rs, ms, tol.span);
      ojson e;
      e["subset"] = ints(sw.subset);
      e["saturation"] = ints(sw.saturation);
      e["dim_q_I"] = sw.dim_q_i;
      e["dim_stab"] = sw.dim_stab;
      e["dim_q_J"] = sw.dim_q_j;
      e["dim_V1"] = sw.dim_v1;
      e["lower_residual"] = num(sw.lower_residual);
      e["upper_residual"] = num(sw.upper_residual);
      e["irreducible"] = sw.irreducible;
      e["ok"] = sw.ok;
      aj["sandwich"].push_back(std::move(e));
      all_ok = all_ok && sw.ok;
    }
    report["atlas"] = aj;
    checks.add("atlas.matched", atlas.matched);
    checks.add("atlas.sandwich", all_ok);
  }

  if (wants(tasks, "flow")) {
    const Vector beta_coords = beta_for_subset(rs, {});
    const BetaProfile bp = beta_profile(beta_matrix(rs, beta_coords), tol.cluster);
    Rng rng(s.seed ^ 0x9e3779b97f4a7c15ULL);
    const ProjectivePoint x0 = random_point(alg.n, rng);
    const double t_end = 40.0;
    const FlowTrace trace = integrate_beta_flow(bp, x0, t_end, 0.01);
    emit_plot_data(trace, out_dir / "flow_trace.csv");
    const FlowLimit lim = flow_limit(bp, x0, tol.membership);
    const double dist_numeric = trace.points.back().distance(lim.limit);
    const double dist_closed = flow_point(bp, t_end, x0).distance(lim.limit);
    bool ascent = true;
    for (std::size_t i = 1; i < trace.size(); ++i) ascent = ascent && trace.values[i] >= trace.values[i - 1] - 1e-12;
    ojson fj;
    fj["beta"] = vec(beta_coords);
    fj["eigenvalues"] = ojson::array();
    for (double l : bp.eigenvalues) fj["eigenvalues"].push_back(num(l));
    fj["x0"] = vec(x0.rep());
    fj["stratum"] = lim.stratum;
    fj["limit"] = vec(lim.limit.rep());
    fj["limit_value"] = num(mu_beta(lim.limit, bp));
    fj["trace"] = trace_summary(trace);
    fj["distance_numeric"] = num(dist_numeric);
    fj["distance_closed_form"] = num(dist_closed);
    fj["csv"] = "flow_trace.csv";
    report["flow"] = fj;
    checks.add("flow.reaches_limit", dist_numeric <= 1e-6, "distance " + fmt(dist_numeric));
    checks.add("flow.ascent", ascent);
  }

  if (wants(tasks, "normflow")) {
    Rng rng(s.seed ^ 0xbf58476d1ce4e5b9ULL);
    const ProjectivePoint x0 = random_point(alg.n, rng);
    NormFlowOptions opt;
    opt.grad_tol = tol.grad;
    const NormFlowResult res = integrate_norm_flow(x0, p.split, opt);
    emit_plot_data(res.trace, out_dir / "normflow_trace.csv");
    bool descent = true;
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
      descent = descent && res.trace.values[i] <= res.trace.values[i - 1] + 1e-12;
    }
    const int g_samples = std::min(s.samples, 20);
    const OrbitInfReport inf = orbit_inf_check(x0, p.split, alg.frame, g_samples, s.seed + 17, 1.0, opt);
    ojson nj;
    nj["x0"] = vec(x0.rep());
    nj["trace"] = trace_summary(res.trace);
    nj["converged"] = res.converged;
    nj["grad_norm"] = num(res.grad_norm);
    nj["limit_norm"] = num(mu_norm(res.x_inf, p.split));
    nj["csv"] = "normflow_trace.csv";
    ojson oj;
    oj["samples"] = inf.samples;
    oj["base_limit_norm"] = num(inf.base_limit_norm);
    oj["spread"] = num(inf.spread);
    oj["worst_undercut"] = num(inf.worst_undercut);
    oj["non_converged"] = inf.non_converged;
    oj["ok"] = inf.ok;
    nj["orbit_inf"] = oj;
    report["normflow"] = nj;
    checks.add("normflow.descent", descent);
    checks.add("normflow.orbit_inf", inf.ok, "spread " + fmt(inf.spread) + ", undercut " + fmt(inf.worst_undercut));
  }

  if (wants(tasks, "strata")) {
    NormFlowOptions opt;
    opt.grad_tol = tol.grad;
    const StratumReport sr =
        stratification_probe(p.split, alg.n, std::max(s.samples, 100), s.seed + 29, tol.strata, 20, opt);
    ojson sj;
    sj["samples"] = sr.samples;
    sj["min_value"] = num(sr.min_value);
    sj["min_fraction"] = num(sr.min_fraction);
    sj["non_converged"] = sr.non_converged;
    sj["bin_edges"] = ojson::array();
    for (double e : sr.bin_edges) sj["bin_edges"].push_back(num(e));
    sj["histogram"] = ints(sr.histogram);
    report["strata"] = sj;
    int total = 0;
    for (int h : sr.histogram) total += h;
    checks.add("strata.histogram_total", total == sr.samples);
    if (verify) checks.add("strata.minimal_dominates", sr.min_fraction >= 0.95, "fraction " + fmt(sr.min_fraction));
  }

  if (verify) {
    Rng rng(s.seed ^ 0x94d049bb133111ebULL);
    const int count = std::max(s.samples, 20);
    double formula = 0.0, tangency = 0.0, containment = 0.0;
    for (int i = 0; i < count; ++i) {
      const ProjectivePoint z = random_point(alg.n, rng);
      Matrix beta = Matrix::Zero(alg.n, alg.n);
      for (const auto& b : p.split.p_basis) beta += rng.normal() * b;
      const Matrix mu = gradient_map(z, p.split);
      const double lhs = trace_form(mu, beta);
      const double rhs = mu_beta(z, beta_profile(beta, tol.cluster));
      formula = std::max(formula, std::abs(lhs - rhs));
      tangency = std::max(tangency, std::abs(z.rep().dot(grad_nu_field(z, p.split))));
      containment = std::max(containment, poly.violation(mu_a(z, p.a)));
    }
    checks.add("verify.gradient_formula", formula <= 1e-10, "max error " + fmt(formula));
    checks.add("verify.field_tangent", tangency <= 1e-12, "max |x.field| " + fmt(tangency));
    checks.add("verify.kostant_containment", containment <= 1e-8, "max violation " + fmt(containment));

    // Top eigenvalue of a dominant beta is attained at the highest weight line.
    const Vector dominant = beta_for_subset(rs, {});
    const BetaProfile bp = beta_profile(beta_matrix(rs, dominant), tol.cluster);
    const ProjectivePoint xo(wd.v_rho);
    double exceed = 0.0;
    for (const auto& y : orbit_sample(p.split.k_basis, xo, count, std::numbers::pi, s.seed + 41)) {
      exceed = std::max(exceed, mu_beta(y, bp) - bp.eigenvalues.front());
    }
    const double attain = std::abs(mu_beta(xo, bp) - bp.eigenvalues.front());
    checks.add("verify.max_attained", attain <= 1e-10, "gap " + fmt(attain));
    checks.add("verify.max_not_exceeded", exceed <= 1e-10, "excess " + fmt(exceed));
  }
}

}  // namespace

void apply_tolerance(Tolerances& tol, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InputError("tolerance override must look like KEY=VAL");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) throw InputError("bad tolerance value '" + text + "'");
  set_tolerance(tol, key, value);
}

Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("scenario parse error at " + line_col(text, e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw InputError("scenario must be a JSON object");
  Scenario s;
  bool rep_from_preset = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "group") {
      parse_group(value, s, rep_from_preset);
    } else if (key == "representation") {
      // Parsed after the group so it overrides a preset's representation.
    } else if (key == "tasks") {
      if (!value.is_array()) throw InputError("tasks must be an array");
      for (const auto& t : value) {
        if (!t.is_string()) throw InputError("task names must be strings");
        const std::string name = t.get<std::string>();
        const auto& known = task_names();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
          throw InputError("unknown task '" + name + "'");
        }
        if (std::find(s.tasks.begin(), s.tasks.end(), name) == s.tasks.end()) s.tasks.push_back(name);
      }
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw InputError("seed must be a nonnegative integer");
      s.seed = value.get<std::uint64_t>();
    } else if (key == "samples") {
      if (!value.is_number_integer() || value.get<long long>() < 1 || value.get<long long>() > 1000000) {
        throw InputError("samples must be a positive integer");
      }
      s.samples = value.get<int>();
    } else if (key == "tolerances") {
      if (!value.is_object()) throw InputError("tolerances must be an object");
      for (const auto& [tk, tv] : value.items()) {
        if (!tv.is_number()) throw InputError("tolerance '" + tk + "' must be a number");
        set_tolerance(s.tol, tk, tv.get<double>());
      }
    } else if (key == "output_dir") {
      if (!value.is_string()) throw InputError("output_dir must be a string");
      s.output_dir = value.get<std::string>();
    } else {
      throw InputError("unknown scenario field '" + key + "'");
    }
  }
  if (!j.contains("group")) throw InputError("scenario needs a group");
  if (j.contains("representation")) s.rep = parse_representation(j["representation"]);
  if (s.tasks.empty()) throw InputError("scenario needs a nonempty task list");
  std::stable_sort(s.tasks.begin(), s.tasks.end(), [](const std::string& a, const std::string& b) {
    const auto& order = task_names();
    return std::find(order.begin(), order.end(), a) < std::find(order.begin(), order.end(), b);
  });
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read scenario file " + path.string());
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_scenario(buf.str());
}

void emit_plot_data(const FlowTrace& trace, const std::filesystem::path& path) {
  if (trace.empty()) throw Error("cli", "emit_plot_data: empty trace");
  std::string out = "t,value";
  const Eigen::Index n = trace.points.front().dim();
  for (Eigen::Index i = 0; i < n; ++i) out += ",x" + std::to_string(i);
  out += '\n';
  char buf[40];
  for (std::size_t r = 0; r < trace.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.17g", trace.times[r]);
    out += buf;
    std::snprintf(buf, sizeof buf, ",%.17g", trace.values[r]);
    out += buf;
    const Vector& x = trace.points[r].rep();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", x(i));
      out += buf;
    }
    out += '\n';
  }
  write_text(path, out);
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  RunResult result;
  Scenario s = scenario;
  try {
    if (options.seed) s.seed = *options.seed;
    if (options.samples) {
      if (*options.samples < 1) throw InputError("samples must be a positive integer");
      s.samples = *options.samples;
    }
    for (const auto& t : options.tolerance_overrides) apply_tolerance(s.tol, t);
  } catch (const InputError& e) {
    std::cerr << "orbitope: " << e.what() << '\n';
    result.exit_code = 1;
    result.failures.push_back(e.what());
    return result;
  }

  const std::filesystem::path out_dir = options.out ? *options.out : std::filesystem::path(s.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "orbitope: cannot create output directory " << out_dir.string() << '\n';
    result.exit_code = 1;
    result.failures.push_back("cannot create output directory");
    return result;
  }

  ojson report;
  report["schema"] = 1;
  ojson sc;
  sc["group"] = s.group_name;
  sc["base"] = s.base;
  sc["representation"]["kind"] = s.rep.kind;
  sc["representation"]["k"] = s.rep.k;
  sc["tasks"] = s.tasks;
  sc["seed"] = s.seed;
  sc["samples"] = s.samples;
  sc["verify"] = options.verify;
  report["scenario"] = sc;

  Checks checks;
  try {
    execute(s, options.verify, out_dir, report, checks);
  } catch (const Error& e) {
    report["error"]["module"] = e.module();
    report["error"]["message"] = e.what();
    checks.add("run.completed", false, e.what());
    std::cerr << "orbitope: " << e.what() << '\n';
  }
  report["checks"] = checks.list;
  report["status"] = checks.failures.empty() ? "pass" : "fail";
  result.failures = checks.failures;
  result.report_path = out_dir / "report.json";
  try {
    write_text(result.report_path, report.dump(2) + "\n");
  } catch (const Error& e) {
    std::cerr << "orbitope: " << e.what() << '\n';
    result.exit_code = 1;
    return result;
  }
  result.exit_code = checks.failures.empty() ? 0 : 2;
  return result;
}

RunResult run_scenario(const std::filesystem::path& path, const RunOptions& options) {
  try {
    return run_scenario(load_scenario(path), options);
  } catch (const InputError& e) {
    std::cerr << "orbitope: " << e.what() << '\n';
    RunResult r;
    r.exit_code = 1;
    r.failures.push_back(e.what());
    return r;
  } catch (const Error& e) {
    std::cerr << "orbitope: " << e.what() << '\n';
    RunResult r;
    r.exit_code = 2;
    r.failures.push_back(e.what());
    return r;
  }
}

}  // namespace orbitope
