#include "annc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace annc {

namespace {

std::vector<Function1D> step_functions(const PipelineStep& step, std::int64_t d) {
  if (step.kind != StepKind::Componentwise) return {};
  if (step.fns.empty())
    throw PipelineSpecError("pipeline: componentwise step needs at least one function");
  if (step.fns.size() == 1) return std::vector<Function1D>(static_cast<std::size_t>(d), step.fns[0]);
  if (static_cast<std::int64_t>(step.fns.size()) != d)
    throw PipelineSpecError("pipeline: componentwise step has " + std::to_string(step.fns.size()) +
                            " functions for dimension " + std::to_string(d));
  return step.fns;
}

// Rational upper bound on c (1+2R)^a.
Rational lipschitz_upper_loclip(double c, double a, double R) {
  if (c == 0.0) return Rational(0);
  if (a == 0.0) return rat_from_double(c);
  const double base = 1.0 + 2.0 * R;
  if (a == std::floor(a) && a >= 0.0 && a <= 64.0) {
    Rational r = rat_from_double(c);
    const Rational b = rat_from_double(base);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(a); ++i) r *= b;
    return r;
  }
  // Non-integer exponent: double pow with a generous upward margin.
  const double v = c * std::pow(base, a) * (1.0 + 1e-9);
  return rat_from_double(std::nextafter(v, std::numeric_limits<double>::infinity()));
}

}  // namespace

void validate_pipeline(const PipelineSpec& spec) {
  if (spec.input_dim < 1) throw PipelineSpecError("pipeline: input dimension must be >= 1");
  if (spec.steps.empty()) throw PipelineSpecError("pipeline: needs at least one step");
  bool bounded = false;  // a componentwise step with value bounds <= 1 has run
  for (std::size_t i = 0; i < spec.steps.size(); ++i) {
    const PipelineStep& step = spec.steps[i];
    switch (step.kind) {
      case StepKind::Componentwise: {
        const auto fns = step_functions(step, spec.input_dim);
        bool all_unit = true;
        for (const auto& fn : fns) all_unit = all_unit && fn.value_bound <= 1.0;
        if (all_unit) bounded = true;
        break;
      }
      case StepKind::RunningProduct:
        if (i > 0 && !bounded)
          throw PipelineSpecError(
              "pipeline: running-product step at position " + std::to_string(i + 1) +
              " requires an earlier componentwise step with value bounds <= 1 "
              "(products only apply to pre-bounded values)");
        bounded = true;  // clipped products land in [-1, 1]
        break;
      case StepKind::RunningMax:
        break;  // preserves bounds
    }
  }
}

PipelineBudget plan_pipeline_budget(const PipelineSpec& spec, double R, double eps) {
  validate_pipeline(spec);
  if (!(R >= 1.0)) throw std::invalid_argument("pipeline: R must be >= 1");
  if (!(eps > 0.0) || !(eps <= 1.0)) throw std::invalid_argument("pipeline: eps must be in (0, 1]");

  const std::int64_t d = spec.input_dim;
  const std::size_t n = spec.steps.size();
  PipelineBudget plan;
  plan.eps = rat_from_double(eps);
  plan.step_eps.resize(n);
  plan.step_lipschitz.resize(n);
  plan.build_radius.resize(n);

  // Forward pass: the radius bounding the true values entering each step.
  double radius = R;
  for (std::size_t i = 0; i < n; ++i) {
    plan.build_radius[i] = std::max(1.0, radius);
    switch (spec.steps[i].kind) {
      case StepKind::RunningMax:
        break;
      case StepKind::RunningProduct:
        radius = 1.0;
        break;
      case StepKind::Componentwise: {
        double bound = 0.0;
        for (const auto& fn : step_functions(spec.steps[i], d)) bound = std::max(bound, fn.value_bound);
        radius = bound;
        break;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    switch (spec.steps[i].kind) {
      case StepKind::RunningMax:
        plan.step_lipschitz[i] = rat_sqrt_upper(Rational(d));
        break;
      case StepKind::RunningProduct:
        plan.step_lipschitz[i] = rat_sqrt_upper(Rational(32)) * Rational(d) * Rational(d) * Rational(d);
        break;
      case StepKind::Componentwise: {
        Rational lip(0);
        for (const auto& fn : step_functions(spec.steps[i], d))
          lip = std::max(lip, lipschitz_upper_loclip(fn.lip_c, fn.lip_a, plan.build_radius[i]));
        plan.step_lipschitz[i] = lip;
        break;
      }
    }
  }

  // eps_i = eps / (n max{1, prod_{j>i} L_j}); exact steps consume nothing.
  Rational total(0);
  for (std::size_t i = 0; i < n; ++i) {
    Rational downstream(1);
    for (std::size_t j = i + 1; j < n; ++j) downstream *= plan.step_lipschitz[j];
    const Rational denom = std::max(Rational(1), downstream);
    if (spec.steps[i].kind == StepKind::RunningMax) {
      plan.step_eps[i] = Rational(0);
    } else {
      plan.step_eps[i] = plan.eps / (Rational(static_cast<std::int64_t>(n)) * denom);
      total += downstream * plan.step_eps[i];
    }
  }
  plan.weighted_sum = total;
  plan.within_budget = total <= plan.eps;
  return plan;
}

PipelineBuild build_pipeline_detailed(const PipelineSpec& spec, double R, double eps) {
  PipelineBudget plan = plan_pipeline_budget(spec, R, eps);
  if (!plan.within_budget)
    throw std::logic_error("pipeline: budget allocation exceeds eps");  // unreachable by construction
  const std::int64_t d = spec.input_dim;

  std::vector<Network> chain;  // outermost (last step) first
  chain.reserve(spec.steps.size());
  for (std::size_t idx = spec.steps.size(); idx-- > 0;) {
    const PipelineStep& step = spec.steps[idx];
    switch (step.kind) {
      case StepKind::RunningMax:
        chain.push_back(build_running_max(d));
        break;
      case StepKind::RunningProduct:
        chain.push_back(build_running_prod_clipped(d, plan.build_radius[idx],
                                                   double_below(plan.step_eps[idx])));
        break;
      case StepKind::Componentwise:
        chain.push_back(build_componentwise(step_functions(step, d), plan.build_radius[idx],
                                            double_below(plan.step_eps[idx])));
        break;
    }
  }
  Network net = (chain.size() == 1) ? std::move(chain.front())
                                    : compose_chain_with_identities(std::move(chain));
  return PipelineBuild{std::move(net), std::move(plan)};
}

Network build_pipeline(const PipelineSpec& spec, double R, double eps) {
  return build_pipeline_detailed(spec, R, eps).net;
}

std::int64_t pipeline_out_dim(const PipelineSpec& spec, std::int64_t d) {
  if (d < 1) throw std::invalid_argument("pipeline_out_dim: d must be >= 1");
  (void)spec;  // every step maps R^d to R^d
  return d;
}

std::function<Vec(const Vec&)> pipeline_reference(const PipelineSpec& spec) {
  const std::int64_t d = spec.input_dim;
  std::vector<PipelineStep> steps = spec.steps;
  return [steps, d](const Vec& x) {
    Vec cur = x;
    for (const auto& step : steps) {
      Vec next(cur.size());
      switch (step.kind) {
        case StepKind::RunningMax: {
          double running = cur[0];
          for (std::size_t i = 0; i < cur.size(); ++i) {
            running = std::max(running, cur[i]);
            next[i] = running;
          }
          break;
        }
        case StepKind::RunningProduct: {
          double running = 1.0;
          for (std::size_t i = 0; i < cur.size(); ++i) {
            running *= std::max(-1.0, std::min(cur[i], 1.0));
            next[i] = running;
          }
          break;
        }
        case StepKind::Componentwise: {
          const auto fns = step_functions(step, d);
          for (std::size_t i = 0; i < cur.size(); ++i) next[i] = fns[i].eval(cur[i]);
          break;
        }
      }
      cur = std::move(next);
    }
    return cur;
  };
}

Function1D named_function(const std::string& name) {
  if (name == "sin") return Function1D{[](double x) { return std::sin(x); }, 1.0, 0.0, 1.0};
  if (name == "cos") return Function1D{[](double x) { return std::cos(x); }, 1.0, 0.0, 1.0};
  if (name == "tanh") return Function1D{[](double x) { return std::tanh(x); }, 1.0, 0.0, 1.0};
  if (name.rfind("const:", 0) == 0) {
    const double v = std::stod(name.substr(6));
    return Function1D{[v](double) { return v; }, 0.0, 0.0, std::fabs(v)};
  }
  if (name.rfind("clip:", 0) == 0) {
    const std::string rest = name.substr(5);
    const auto sep = rest.find(':');
    if (sep == std::string::npos)
      throw std::invalid_argument("named_function: expected clip:<u>:<v>, got " + name);
    const double u = std::stod(rest.substr(0, sep));
    const double v = std::stod(rest.substr(sep + 1));
    if (v < u) throw std::invalid_argument("named_function: clip needs u <= v in " + name);
    return Function1D{[u, v](double x) { return std::max(u, std::min(x, v)); }, 1.0, 0.0,
                      std::max(std::fabs(u), std::fabs(v))};
  }
  throw std::invalid_argument("named_function: unknown function \"" + name +
                              "\" (known: sin, cos, tanh, const:<v>, clip:<u>:<v>)");
}

PipelineSpec parse_pipeline(const std::string& text, std::int64_t input_dim) {
  PipelineSpec spec;
  spec.input_dim = input_dim;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, '|')) {
    if (token.empty()) throw std::invalid_argument("parse_pipeline: empty step in \"" + text + "\"");
    if (token == "rmax") {
      spec.steps.push_back({StepKind::RunningMax, {}});
    } else if (token == "rprod") {
      spec.steps.push_back({StepKind::RunningProduct, {}});
    } else if (token.rfind("cw:", 0) == 0) {
      PipelineStep step{StepKind::Componentwise, {}};
      std::stringstream fn_stream(token.substr(3));
      std::string fn_name;
      while (std::getline(fn_stream, fn_name, ',')) step.fns.push_back(named_function(fn_name));
      if (step.fns.empty())
        throw std::invalid_argument("parse_pipeline: componentwise step without functions in \"" + text + "\"");
      spec.steps.push_back(std::move(step));
    } else {
      throw std::invalid_argument("parse_pipeline: unknown step \"" + token +
                                  "\" (expected rmax, rprod, or cw:<fns>)");
    }
  }
  if (spec.steps.empty()) throw std::invalid_argument("parse_pipeline: no steps in \"" + text + "\"");
  return spec;
}

}  // namespace annc
