#pragma once

#include <string>

#include "annc/pipeline.hpp"
#include "annc/verify.hpp"

namespace annc {

/// Extra knobs a construction may take beyond (d, R, eps).
struct BuildOptions {
  std::vector<std::string> fns;  // loclip1d / componentwise
  std::string pipeline;          // pipeline DSL
  double clip_lo = -1.0;
  double clip_hi = 1.0;
};

/// A named construction with everything the harness needs: builder, exact
/// oracle, verification domain, and the claims instantiated at (d, R, eps).
struct ConstructionEntry {
  std::string name;
  bool uses_d = false, uses_R = false, uses_eps = false;
  SweepPlan plan;
};

/// Known names: identity, clip, max, running_max, square01, square, prod2,
/// pairwise_prod, prod_pow2 (d acts as the tree depth k), prod,
/// running_prod_clipped, loclip1d, componentwise, pipeline.
ConstructionEntry get_construction(const std::string& name, const BuildOptions& options = {});
std::vector<std::string> construction_names();

}  // namespace annc
