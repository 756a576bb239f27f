#include "annc/registry.hpp"

#include <algorithm>
#include <cmath>

namespace annc {

namespace {

double relu(double x) { return x > 0.0 ? x : 0.0; }

double ceil_log2_d(std::int64_t d) { return static_cast<double>(ceil_log2(d)); }

VectorFn componentwise_oracle(std::vector<Function1D> fns) {
  return [fns](const Vec& x) {
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = fns[i].eval(x[i]);
    return y;
  };
}

std::vector<Function1D> resolve_fns(const std::vector<std::string>& names, std::int64_t d,
                                    const std::string& fallback) {
  std::vector<std::string> use = names;
  if (use.empty()) use.push_back(fallback);
  std::vector<Function1D> fns;
  if (use.size() == 1) {
    fns.assign(static_cast<std::size_t>(d), named_function(use[0]));
  } else {
    if (static_cast<std::int64_t>(use.size()) != d)
      throw std::invalid_argument("expected 1 or d function names, got " + std::to_string(use.size()));
    for (const auto& name : use) fns.push_back(named_function(name));
  }
  return fns;
}

std::vector<std::int64_t> square_dims_pattern(std::int64_t L, bool scaled) {
  std::vector<std::int64_t> pattern;
  pattern.push_back(1);
  if (scaled) pattern.push_back(2);
  for (std::int64_t k = scaled ? 2 : 1; k < L; ++k) pattern.push_back(4);
  pattern.push_back(1);
  return pattern;
}

std::vector<std::int64_t> prod2_dims_pattern(std::int64_t L, std::int64_t d) {
  std::vector<std::int64_t> pattern;
  pattern.push_back(2 * d);
  pattern.push_back(6 * d);
  for (std::int64_t k = 2; k < L; ++k) pattern.push_back(12 * d);
  pattern.push_back(d);
  return pattern;
}

}  // namespace

ConstructionEntry get_construction(const std::string& name, const BuildOptions& options) {
  ConstructionEntry entry;
  entry.name = name;

  if (name == "identity") {
    entry.uses_d = true;
    entry.uses_R = true;
    entry.plan.build = [](const CellParams& c) { return identity_net(c.d); };
    entry.plan.oracle = [](const CellParams&) { return [](const Vec& x) { return x; }; };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(c.d, c.R); };
    entry.plan.claims = [](const CellParams& c, const Network&) {
      Claims claims;
      claims.sup_error_bound = 1e-12 * (1.0 + c.R);
      claims.lipschitz_bound = 1.0;
      claims.bounds.push_back(param_equals(static_cast<double>(4 * c.d * c.d + 3 * c.d)));
      claims.bounds.push_back(dims_equal({c.d, 2 * c.d, c.d}));
      return claims;
    };
    return entry;
  }

  if (name == "clip") {
    entry.uses_d = true;
    entry.uses_R = true;
    const double lo = options.clip_lo, hi = options.clip_hi;
    entry.plan.build = [lo, hi](const CellParams& c) { return build_clip(lo, hi, c.d); };
    entry.plan.oracle = [lo, hi](const CellParams&) {
      return [lo, hi](const Vec& x) {
        Vec y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::max(lo, std::min(x[i], hi));
        return y;
      };
    };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(c.d, c.R); };
    entry.plan.claims = [](const CellParams& c, const Network&) {
      Claims claims;
      claims.sup_error_bound = 1e-11 * (1.0 + c.R);
      claims.lipschitz_bound = 1.0;
      claims.bounds.push_back(param_equals(static_cast<double>(3 * c.d * c.d + 3 * c.d)));
      claims.bounds.push_back(dims_equal({c.d, c.d, c.d, c.d}));
      return claims;
    };
    return entry;
  }

  if (name == "max") {
    entry.uses_d = true;
    entry.uses_R = true;
    entry.plan.build = [](const CellParams& c) { return build_max(c.d); };
    entry.plan.oracle = [](const CellParams&) {
      return [](const Vec& x) { return Vec{*std::max_element(x.begin(), x.end())}; };
    };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(c.d, c.R); };
    entry.plan.claims = [](const CellParams& c, const Network& net) {
      Claims claims;
      claims.sup_error_bound = 1e-11 * (1.0 + c.R);
      claims.lipschitz_bound = 1.0;
      if (c.d >= 2) {
        claims.bounds.push_back(length_equals(ceil_log2_d(c.d) + 1.0));
        claims.bounds.push_back(
            param_bound(3.0 * c.d * c.d + 18.0 * c.d + 12.0 * ceil_log2_d(c.d) - 6.5));
        for (std::int64_t i = 0; i <= net.length(); ++i) {
          const double cap = 3.0 * std::ceil(static_cast<double>(c.d) / std::exp2(static_cast<double>(i)));
          claims.bounds.push_back(width_bound(i, cap));
        }
        if (c.d == 2) claims.bounds.push_back(param_equals(13.0));
      } else {
        claims.bounds.push_back(param_equals(7.0));
      }
      return claims;
    };
    return entry;
  }

  if (name == "running_max") {
    entry.uses_d = true;
    entry.uses_R = true;
    entry.plan.build = [](const CellParams& c) { return build_running_max(c.d); };
    entry.plan.oracle = [](const CellParams&) {
      return [](const Vec& x) {
        Vec y(x.size());
        double running = x[0];
        for (std::size_t i = 0; i < x.size(); ++i) {
          running = std::max(running, x[i]);
          y[i] = running;
        }
        return y;
      };
    };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(c.d, c.R); };
    entry.plan.claims = [](const CellParams& c, const Network&) {
      Claims claims;
      claims.sup_error_bound = 1e-10 * (1.0 + c.R);
      claims.lipschitz_bound = std::sqrt(static_cast<double>(c.d));
      if (c.d >= 2) {
        const double dd = static_cast<double>(c.d);
        claims.bounds.push_back(param_bound(3.0 * dd * dd * dd * dd + 30.0 * dd * dd * dd));
      }
      return claims;
    };
    return entry;
  }

  if (name == "square01") {
    entry.uses_eps = true;
    entry.plan.build = [](const CellParams& c) { return build_square01(c.eps); };
    entry.plan.oracle = [](const CellParams&) {
      return [](const Vec& x) { return Vec{x[0] * x[0]}; };
    };
    entry.plan.domain = [](const CellParams&) { return Box::interval(0.0, 1.0); };
    entry.plan.claims = [](const CellParams& c, const Network&) {
      const std::int64_t L = square01_length(c.eps);
      Claims claims;
      claims.sup_error_bound = c.eps;
      claims.lipschitz_bound = 2.0;
      claims.lipschitz_domain = Box::interval(-1.0, 2.0);
      claims.bounds.push_back(length_equals(static_cast<double>(L)));
      claims.bounds.push_back(dims_equal(square_dims_pattern(L, false)));
      claims.bounds.push_back(param_bound(std::max(13.0, 10.0 * std::log2(1.0 / c.eps) - 7.0)));
      return claims;
    };
    return entry;
  }

  if (name == "square") {
    entry.uses_R = true;
    entry.uses_eps = true;
    entry.plan.build = [](const CellParams& c) { return build_square(c.R, c.eps); };
    entry.plan.oracle = [](const CellParams&) {
      return [](const Vec& x) { return Vec{x[0] * x[0]}; };
    };
    entry.plan.domain = [](const CellParams& c) { return Box::interval(-c.R, c.R); };
    entry.plan.claims = [](const CellParams& c, const Network&) {
      const std::int64_t L = square01_length(c.eps / (c.R * c.R)) + 1;
      Claims claims;
      claims.sup_error_bound = c.eps;
      claims.lipschitz_bound = 2.0 * c.R;
      claims.lipschitz_domain = Box::interval(-c.R - 1.0, c.R + 1.0);
      claims.bounds.push_back(length_equals(static_cast<double>(L)));
      claims.bounds.push_back(dims_equal(square_dims_pattern(L, true)));
      claims.bounds.push_back(
          param_bound(std::max(21.0, 20.0 * std::log2(c.R) - 10.0 * std::log2(c.eps) + 1.0)));
      return claims;
    };
    return entry;
  }

  if (name == "prod2") {
    entry.uses_R = true;
    entry.uses_eps = true;
    entry.plan.build = [](const CellParams& c) { return build_prod2(c.R, c.eps); };
    entry.plan.oracle = [](const CellParams&) {
      return [](const Vec& x) { return Vec{x[0] * x[1]}; };
    };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(2, c.R); };
    entry.plan.claims = [](const CellParams& c, const Network& net) {
      Claims claims;
      claims.sup_error_bound = c.eps;
      claims.lipschitz_bound = std::sqrt(32.0) * c.R;
      claims.lipschitz_domain = Box::centered(2, c.R + 1.0);
      claims.bounds.push_back(dims_equal(prod2_dims_pattern(net.length(), 1)));
      claims.bounds.push_back(param_bound(
          std::max(157.0, 211.0 + 180.0 * std::log2(c.R) - 90.0 * std::log2(c.eps))));
      return claims;
    };
    return entry;
  }

  if (name == "pairwise_prod") {
    entry.uses_d = true;
    entry.uses_R = true;
    entry.uses_eps = true;
    entry.plan.build = [](const CellParams& c) { return build_pairwise_prod(c.d, c.R, c.eps); };
    entry.plan.oracle = [](const CellParams& c) {
      const std::int64_t d = c.d;
      return [d](const Vec& x) {
        Vec y(static_cast<std::size_t>(d));
        for (std::int64_t i = 0; i < d; ++i)
          y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(2 * i)] * x[static_cast<std::size_t>(2 * i + 1)];
        return y;
      };
    };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(2 * c.d, c.R); };
    entry.plan.claims = [](const CellParams& c, const Network& net) {
      const double dd = static_cast<double>(c.d);
      Claims claims;
      claims.sup_error_bound = c.eps;
      claims.lipschitz_bound = std::sqrt(32.0) * c.R;
      claims.lipschitz_domain = Box::centered(2 * c.d, c.R + 1.0);
      claims.bounds.push_back(dims_equal(prod2_dims_pattern(net.length(), c.d)));
      claims.bounds.push_back(param_bound(
          dd * dd *
          std::max(157.0, 211.0 + 45.0 * (4.0 * std::log2(c.R) - 2.0 * std::log2(c.eps) +
                                          std::log2(dd)))));
      return claims;
    };
    return entry;
  }

  if (name == "prod_pow2") {
    entry.uses_d = true;  // d plays the tree depth k
    entry.uses_R = true;
    entry.uses_eps = true;
    entry.plan.build = [](const CellParams& c) { return build_prod_pow2(c.d, c.R, c.eps); };
    entry.plan.oracle = [](const CellParams&) {
      return [](const Vec& x) {
        double acc = 1.0;
        for (double v : x) acc *= v;
        return Vec{acc};
      };
    };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(std::int64_t{1} << c.d, c.R); };
    entry.plan.claims = [](const CellParams& c, const Network&) {
      const double k = static_cast<double>(c.d);
      Claims claims;
      claims.sup_error_bound = c.eps;
      claims.lipschitz_bound = std::exp2(2.5 * k) * std::pow(c.R, std::exp2(k) - 1.0);
      claims.bounds.push_back(param_bound(426.0 * k * std::exp2(2.0 * k) +
                                          90.0 * relu(std::log2(c.R)) * std::exp2(3.0 * k) +
                                          90.0 * relu(std::log2(1.0 / c.eps)) * std::exp2(2.0 * k)));
      return claims;
    };
    return entry;
  }

  if (name == "prod") {
    entry.uses_d = true;
    entry.uses_R = true;
    entry.uses_eps = true;
    entry.plan.build = [](const CellParams& c) { return build_prod(c.d, c.R, c.eps); };
    entry.plan.oracle = [](const CellParams&) {
      return [](const Vec& x) {
        double acc = 1.0;
        for (double v : x) acc *= v;
        return Vec{acc};
      };
    };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(c.d, c.R); };
    entry.plan.claims = [](const CellParams& c, const Network&) {
      const double dd = static_cast<double>(c.d);
      Claims claims;
      claims.sup_error_bound = c.eps;
      claims.lipschitz_bound = std::sqrt(32.0) * std::pow(dd, 2.5) * std::pow(c.R, 2.0 * dd - 1.0);
      claims.bounds.push_back(param_bound(1896.0 * dd * dd * dd +
                                          720.0 * std::log2(c.R) * dd * dd * dd +
                                          360.0 * relu(std::log2(1.0 / c.eps)) * dd * dd));
      return claims;
    };
    return entry;
  }

  if (name == "running_prod_clipped") {
    entry.uses_d = true;
    entry.uses_R = true;
    entry.uses_eps = true;
    entry.plan.build = [](const CellParams& c) { return build_running_prod_clipped(c.d, c.R, c.eps); };
    entry.plan.oracle = [](const CellParams&) {
      return [](const Vec& x) {
        Vec y(x.size());
        double running = 1.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          running *= std::max(-1.0, std::min(x[i], 1.0));
          y[i] = running;
        }
        return y;
      };
    };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(c.d, c.R); };
    entry.plan.claims = [](const CellParams& c, const Network&) {
      const double dd = static_cast<double>(c.d);
      Claims claims;
      claims.sup_error_bound = c.eps;
      claims.lipschitz_bound = std::sqrt(32.0) * dd * dd * dd;
      claims.bounds.push_back(param_bound(5315.0 * dd * dd * dd * dd * dd / c.eps));
      return claims;
    };
    return entry;
  }

  if (name == "loclip1d") {
    entry.uses_R = true;
    entry.uses_eps = true;
    std::vector<std::string> names = options.fns;
    if (names.empty()) names.push_back("sin");
    const Function1D fn = named_function(names.front());
    entry.plan.build = [fn](const CellParams& c) { return build_loclip_1d(fn, c.R, c.eps); };
    entry.plan.oracle = [fn](const CellParams&) {
      return [fn](const Vec& x) { return Vec{fn.eval(x[0])}; };
    };
    entry.plan.domain = [](const CellParams& c) { return Box::interval(-c.R, c.R); };
    entry.plan.claims = [fn](const CellParams& c, const Network&) {
      Claims claims;
      claims.sup_error_bound = c.eps;
      const double lip = fn.lip_c * std::pow(1.0 + 2.0 * c.R, fn.lip_a);
      claims.lipschitz_bound = lip;
      claims.lipschitz_domain = Box::interval(-c.R - 2.0, c.R + 2.0);
      claims.bounds.push_back(param_bound(12.0 * fn.lip_c * std::pow(1.0 + 2.0 * c.R, fn.lip_a) *
                                              c.R / c.eps +
                                          10.0));
      return claims;
    };
    return entry;
  }

  if (name == "componentwise") {
    entry.uses_d = true;
    entry.uses_R = true;
    entry.uses_eps = true;
    const std::vector<std::string> names = options.fns;
    entry.plan.build = [names](const CellParams& c) {
      return build_componentwise(resolve_fns(names, c.d, "sin"), c.R, c.eps);
    };
    entry.plan.oracle = [names](const CellParams& c) {
      return componentwise_oracle(resolve_fns(names, c.d, "sin"));
    };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(c.d, c.R); };
    entry.plan.claims = [names](const CellParams& c, const Network&) {
      Claims claims;
      claims.sup_error_bound = c.eps;
      double lip = 0.0;
      for (const auto& fn : resolve_fns(names, c.d, "sin"))
        lip = std::max(lip, fn.lip_c * std::pow(1.0 + 2.0 * c.R, fn.lip_a));
      claims.lipschitz_bound = lip;
      claims.lipschitz_domain = Box::centered(c.d, c.R + 2.0);
      return claims;
    };
    return entry;
  }

  if (name == "pipeline") {
    entry.uses_d = true;
    entry.uses_R = true;
    entry.uses_eps = true;
    std::string dsl = options.pipeline;
    if (dsl.empty()) dsl = "cw:sin|rprod";
    entry.plan.build = [dsl](const CellParams& c) {
      return build_pipeline(parse_pipeline(dsl, c.d), c.R, c.eps);
    };
    entry.plan.oracle = [dsl](const CellParams& c) {
      return pipeline_reference(parse_pipeline(dsl, c.d));
    };
    entry.plan.domain = [](const CellParams& c) { return Box::centered(c.d, c.R); };
    entry.plan.claims = [dsl](const CellParams& c, const Network&) {
      const PipelineSpec spec = parse_pipeline(dsl, c.d);
      const PipelineBudget plan = plan_pipeline_budget(spec, c.R, c.eps);
      Claims claims;
      claims.sup_error_bound = c.eps;
      double chain_lip = 1.0;
      for (const auto& lip : plan.step_lipschitz) chain_lip *= static_cast<double>(lip);
      claims.lipschitz_bound = chain_lip;
      claims.bounds.push_back(NetBound{"budget_sum<=eps",
                                       [plan](const Network&) { return plan.within_budget ? 0.0 : 1.0; },
                                       0.0, true});
      return claims;
    };
    return entry;
  }

  throw std::invalid_argument("unknown construction \"" + name + "\"");
}

std::vector<std::string> construction_names() {
  return {"identity", "clip",      "max",          "running_max",         "square01",
          "square",   "prod2",     "pairwise_prod", "prod_pow2",          "prod",
          "running_prod_clipped",  "loclip1d",     "componentwise",       "pipeline"};
}

}  // namespace annc
