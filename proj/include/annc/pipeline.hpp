#pragma once

#include <optional>
#include <string>

#include "annc/constructions.hpp"
#include "annc/network.hpp"
#include "annc/rational.hpp"

namespace annc {

enum class StepKind { RunningMax, RunningProduct, Componentwise };

struct PipelineStep {
  StepKind kind;
  std::vector<Function1D> fns;  // Componentwise only; size 1 broadcasts
};

/// Ordered step descriptors applied left to right to vectors in R^d.
/// A RunningProduct step must be preceded by a Componentwise step whose
/// value bounds are all <= 1, unless it is the first step (inputs then have
/// to be pre-clipped by the caller; the step clips regardless).
struct PipelineSpec {
  std::vector<PipelineStep> steps;
  std::int64_t input_dim = 1;
};

/// Thrown when a spec violates the product-ordering requirement.
class PipelineSpecError : public std::invalid_argument {
 public:
  explicit PipelineSpecError(const std::string& what) : std::invalid_argument(what) {}
};

/// Exact-arithmetic budget ledger: step tolerances eps_i, certified global
/// Lipschitz bounds of the downstream step networks, and the weighted sum
/// sum_i (prod_{j>i} L_j) eps_i, which is guaranteed <= eps before any
/// network is built.
struct PipelineBudget {
  std::vector<Rational> step_eps;         // 0 for exact steps
  std::vector<Rational> step_lipschitz;   // certified upper bound per step
  std::vector<double> build_radius;       // domain radius each step is built for
  Rational weighted_sum;
  Rational eps;
  bool within_budget = false;
};

struct PipelineBuild {
  Network net;
  PipelineBudget budget;
};

void validate_pipeline(const PipelineSpec& spec);

/// Budget plan only; throws PipelineSpecError on an invalid spec.
PipelineBudget plan_pipeline_budget(const PipelineSpec& spec, double R, double eps);

/// Builds the full pipeline network: each step's network at its planned
/// tolerance, chained with identity networks interposed.
PipelineBuild build_pipeline_detailed(const PipelineSpec& spec, double R, double eps);
Network build_pipeline(const PipelineSpec& spec, double R, double eps);

/// All steps preserve the coordinate count.
std::int64_t pipeline_out_dim(const PipelineSpec& spec, std::int64_t d);

/// Direct evaluation of the pipeline's target map (no networks): prefix max,
/// clipped prefix product, componentwise functions.
std::function<Vec(const Vec&)> pipeline_reference(const PipelineSpec& spec);

/// Named scalar functions with their Lipschitz metadata: sin, cos, tanh,
/// const:<v>, clip:<u>:<v>.
Function1D named_function(const std::string& name);

/// Compact pipeline text form: steps separated by '|', each one of
/// "rmax", "rprod", or "cw:<fn>[,<fn>...]".
PipelineSpec parse_pipeline(const std::string& text, std::int64_t input_dim);

}  // namespace annc
