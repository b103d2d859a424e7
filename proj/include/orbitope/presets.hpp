#pragma once

// Built-in compatible groups and representations.

#include "orbitope/repspace.hpp"

#include <string>
#include <vector>

namespace orbitope {

/// Generators of the base algebras "sl2", "sl3", "so21" and "sp4" in their
/// defining representations, ordered so that the default positivity rule
/// yields the standard positive system.
MatrixList base_generators(const std::string& base);
std::vector<std::string> base_names();

struct RepresentationSpec {
  std::string kind = "standard";  // standard | sym_power | adjoint
  int k = 1;
};

struct PresetInfo {
  std::string name;
  std::string base;
  RepresentationSpec rep;
  std::string description;
};

const std::vector<PresetInfo>& presets();
const PresetInfo& find_preset(const std::string& name);

/// The representation algebra acting on R^N.
LieAlgebraRep build_representation(const LieAlgebraRep& base, const RepresentationSpec& rep);

/// Everything downstream of a representation: Cartan split, the canonical
/// abelian slice, restricted roots, Weyl group and weights.
struct Pipeline {
  LieAlgebraRep alg;
  CartanSplit split;
  AbelianSlice a;
  RestrictedRootSystem rs;
  WeylGroup w;
};

Pipeline make_pipeline(const LieAlgebraRep& alg, double tol = 1e-8);
Pipeline preset_pipeline(const std::string& name, double tol = 1e-8);

}  // namespace orbitope
