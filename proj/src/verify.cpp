#include "annc/verify.hpp"

#include "annc/algebra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

namespace annc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t bits_of(double x) {
  std::uint64_t out;
  std::memcpy(&out, &x, sizeof(out));
  return out;
}

double euclidean_distance(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

Box Box::centered(std::int64_t d, double R) {
  return Box{Vec(static_cast<std::size_t>(d), -R), Vec(static_cast<std::size_t>(d), R)};
}

Box Box::interval(double lo, double hi, std::int64_t d) {
  return Box{Vec(static_cast<std::size_t>(d), lo), Vec(static_cast<std::size_t>(d), hi)};
}

Vec Box::sample(Rng& rng) const {
  Vec x(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
  return x;
}

BoundCheck make_bound_check(const std::string& label, double measured, double bound) {
  return BoundCheck{label, measured, bound, measured <= bound + 1e-9 * (1.0 + std::fabs(bound))};
}

BoundCheck make_exact_check(const std::string& label, double measured, double bound) {
  return BoundCheck{label, measured, bound, measured == bound};
}

NetBound param_bound(double bound) {
  return NetBound{"params<=bound", [](const Network& n) { return static_cast<double>(param_count(n)); },
                  bound, false};
}

NetBound param_equals(double value) {
  return NetBound{"params==value", [](const Network& n) { return static_cast<double>(param_count(n)); },
                  value, true};
}

NetBound length_equals(double value) {
  return NetBound{"length==value", [](const Network& n) { return static_cast<double>(n.length()); },
                  value, true};
}

NetBound width_bound(std::int64_t layer_index, double bound) {
  return NetBound{"width[" + std::to_string(layer_index) + "]<=bound",
                  [layer_index](const Network& n) { return static_cast<double>(dim_at(n, layer_index)); },
                  bound, false};
}

NetBound dims_equal(std::vector<std::int64_t> expected) {
  return NetBound{"dims==pattern",
                  [expected](const Network& n) {
                    const auto actual = dims(n);
                    if (actual.size() != expected.size()) return 1.0 + static_cast<double>(actual.size());
                    double mismatches = 0.0;
                    for (std::size_t i = 0; i < actual.size(); ++i)
                      if (actual[i] != expected[i]) mismatches += 1.0;
                    return mismatches;
                  },
                  0.0, true};
}

std::vector<BoundCheck> check_bounds(const Network& net, const std::vector<NetBound>& bounds) {
  std::set<std::string> labels;
  std::vector<BoundCheck> checks;
  checks.reserve(bounds.size());
  for (const auto& bound : bounds) {
    if (!labels.insert(bound.label).second)
      throw std::invalid_argument("check_bounds: duplicate label \"" + bound.label + "\"");
    const double measured = bound.measure(net);
    checks.push_back(bound.exact ? make_exact_check(bound.label, measured, bound.bound)
                                 : make_bound_check(bound.label, measured, bound.bound));
  }
  return checks;
}

double estimate_sup_error(const Network& net, const VectorFn& oracle, const Box& domain,
                          std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("estimate_sup_error: samples must be positive");
  if (domain.dim() != net.input_dim())
    throw ShapeError("estimate_sup_error: domain dimension " + std::to_string(domain.dim()) +
                     " != network input " + std::to_string(net.input_dim()));
  Rng rng(seed);
  std::vector<Vec> points;
  points.reserve(static_cast<std::size_t>(samples));
  for (std::int64_t i = 0; i < samples; ++i) points.push_back(domain.sample(rng));
  const auto outputs = realize_many(net, Activation::relu(), points);
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    worst = std::max(worst, euclidean_distance(oracle(points[i]), outputs[i]));
  return worst;
}

double estimate_lipschitz(const Network& net, const Box& domain, std::int64_t pair_samples,
                          std::uint64_t seed) {
  if (pair_samples < 1) throw std::invalid_argument("estimate_lipschitz: samples must be positive");
  if (domain.dim() != net.input_dim())
    throw ShapeError("estimate_lipschitz: domain dimension " + std::to_string(domain.dim()) +
                     " != network input " + std::to_string(net.input_dim()));
  Rng rng(seed);
  std::vector<Vec> points;
  points.reserve(static_cast<std::size_t>(2 * pair_samples));
  for (std::int64_t i = 0; i < 2 * pair_samples; ++i) points.push_back(domain.sample(rng));
  const auto outputs = realize_many(net, Activation::relu(), points);
  double worst = 0.0;
  for (std::int64_t i = 0; i < pair_samples; ++i) {
    const Vec& x = points[static_cast<std::size_t>(2 * i)];
    const Vec& y = points[static_cast<std::size_t>(2 * i + 1)];
    const double dx = euclidean_distance(x, y);
    if (dx == 0.0) continue;
    worst = std::max(worst, euclidean_distance(outputs[static_cast<std::size_t>(2 * i)],
                                               outputs[static_cast<std::size_t>(2 * i + 1)]) /
                                dx);
  }
  return worst;
}

VerifyReport verify(const Network& net, const VectorFn& oracle, const Box& domain,
                    const Claims& claims, std::int64_t samples, std::uint64_t seed) {
  VerifyReport report;
  report.seed = seed;
  report.sample_count = samples;
  report.param_count = param_count(net);
  report.sup_error_estimate =
      estimate_sup_error(net, oracle, domain, samples, derive_seed(seed, 1));
  const Box& lip_domain = claims.lipschitz_domain ? *claims.lipschitz_domain : domain;
  report.lipschitz_estimate = estimate_lipschitz(net, lip_domain, samples, derive_seed(seed, 2));
  if (claims.sup_error_bound)
    report.checks.push_back(
        make_bound_check("sup_error<=eps", report.sup_error_estimate, *claims.sup_error_bound));
  if (claims.lipschitz_bound)
    report.checks.push_back(
        make_bound_check("lipschitz<=L", report.lipschitz_estimate, *claims.lipschitz_bound));
  for (auto& check : check_bounds(net, claims.bounds)) report.checks.push_back(std::move(check));
  std::set<std::string> labels;
  for (const auto& check : report.checks)
    if (!labels.insert(check.label).second)
      throw std::invalid_argument("verify: duplicate check label \"" + check.label + "\"");
  return report;
}

BoundCheck composition_cost_check(const ClaimedNetwork& f1, const ClaimedNetwork& f2,
                                  const Box& domain, const Box& f2_domain, double eps,
                                  std::int64_t samples, std::uint64_t seed) {
  if (f1.net.output_dim() != f2.net.input_dim())
    throw ComposeError("composition_cost_check: O(f1) = " + std::to_string(f1.net.output_dim()) +
                       " != I(f2) = " + std::to_string(f2.net.input_dim()));
  // Containment precondition: f1's true outputs stay inside f2's box.
  {
    Rng rng(derive_seed(seed, 3));
    const double slack = 1e-9;
    for (std::int64_t i = 0; i < std::min<std::int64_t>(samples, 256); ++i) {
      const Vec y = f1.oracle(domain.sample(rng));
      for (std::size_t j = 0; j < y.size(); ++j)
        if (y[j] < f2_domain.lo[j] - slack || y[j] > f2_domain.hi[j] + slack)
          throw std::invalid_argument(
              "composition_cost_check: f1 output leaves f2's domain at coordinate " +
              std::to_string(j));
    }
  }
  std::vector<Network> chain;
  chain.push_back(f2.net);
  chain.push_back(f1.net);
  const Network composed = compose_chain_with_identities(std::move(chain));

  const double d2 = static_cast<double>(f1.net.output_dim());
  const double p_bound = 4.0 * d2 * (d2 + 1.0) +
                         2.0 * static_cast<double>(param_count(f1.net)) +
                         2.0 * static_cast<double>(param_count(f2.net));
  const double p_ratio = static_cast<double>(param_count(composed)) / p_bound;

  const VectorFn composed_oracle = [&f1, &f2](const Vec& x) { return f2.oracle(f1.oracle(x)); };
  const double err =
      estimate_sup_error(composed, composed_oracle, domain, samples, derive_seed(seed, 4));
  const double err_ratio = (err == 0.0) ? 0.0 : err / std::max(eps, 1e-300);
  return make_bound_check("composition_cost(params,error)/bounds", std::max(p_ratio, err_ratio),
                          1.0);
}

ExponentFit fit_exponent(const std::vector<double>& xs, const std::vector<double>& ys) {
  ExponentFit fit;
  std::set<double> distinct(xs.begin(), xs.end());
  if (distinct.size() < 3) return fit;
  const std::size_t n = xs.size();
  double mean_x = 0.0, mean_y = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    mean_x += lx[i];
    mean_y += ly[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mean_x) * (lx[i] - mean_x);
    sxy += (lx[i] - mean_x) * (ly[i] - mean_y);
  }
  fit.exponent = sxy / sxx;
  const double intercept = mean_y - fit.exponent * mean_x;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (intercept + fit.exponent * lx[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / static_cast<double>(n));
  fit.valid = true;
  return fit;
}

SweepResult sweep(const SweepPlan& plan, const std::vector<std::int64_t>& ds,
                  const std::vector<double>& Rs, const std::vector<double>& epss,
                  std::int64_t samples, std::uint64_t seed) {
  if (ds.empty() || Rs.empty() || epss.empty())
    throw std::invalid_argument("sweep: every grid axis needs at least one value");
  SweepResult result;
  for (std::int64_t d : ds) {
    for (double R : Rs) {
      for (double eps : epss) {
        const CellParams cell{d, R, eps};
        const std::uint64_t cell_seed =
            derive_seed(seed, static_cast<std::uint64_t>(d), bits_of(R), bits_of(eps));
        try {
          const Network net = plan.build(cell);
          const VerifyReport report =
              verify(net, plan.oracle(cell), plan.domain(cell), plan.claims(cell, net), samples, cell_seed);
          result.rows.push_back(SweepRow{d, R, eps, report.param_count, report.sup_error_estimate,
                                         report.lipschitz_estimate, report.passed()});
        } catch (const std::exception& e) {
          throw std::runtime_error("sweep: cell (d=" + std::to_string(d) +
                                   ", R=" + format_double(R) + ", eps=" + format_double(eps) +
                                   ") failed: " + e.what());
        }
      }
    }
  }
  // Fit along an axis only when the other axes are held fixed.
  if (Rs.size() == 1 && epss.size() == 1) {
    std::vector<double> xs, ys;
    for (const auto& row : result.rows) {
      xs.push_back(static_cast<double>(row.d));
      ys.push_back(static_cast<double>(row.params));
    }
    result.d_fit = fit_exponent(xs, ys);
  }
  if (ds.size() == 1 && Rs.size() == 1) {
    std::vector<double> xs, ys;
    for (const auto& row : result.rows) {
      xs.push_back(1.0 / row.eps);
      ys.push_back(static_cast<double>(row.params));
    }
    result.eps_fit = fit_exponent(xs, ys);
  }
  return result;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "d,R,eps,params,sup_error,lipschitz,passed\n";
  for (const auto& row : result.rows) {
    out += std::to_string(row.d) + "," + format_double(row.R) + "," + format_double(row.eps) + "," +
           std::to_string(row.params) + "," + format_double(row.sup_error) + "," +
           format_double(row.lipschitz) + "," + (row.passed ? "1" : "0") + "\n";
  }
  return out;
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << sweep_csv(result);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace annc
