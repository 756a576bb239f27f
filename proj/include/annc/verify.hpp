#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "annc/network.hpp"

namespace annc {

using VectorFn = std::function<Vec(const Vec&)>;

/// Deterministic, seedable 64-bit generator; identical seeds reproduce
/// identical sample streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  std::uint64_t next() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

/// Deterministic sub-seed derivation for sweep cells.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Axis-aligned sampling box.
struct Box {
  Vec lo, hi;
  static Box centered(std::int64_t d, double R);
  static Box interval(double lo, double hi, std::int64_t d = 1);
  std::int64_t dim() const { return static_cast<std::int64_t>(lo.size()); }
  Vec sample(Rng& rng) const;
};

/// One named comparison; passed iff measured <= bound + 1e-9 (1 + |bound|),
/// or measured == bound when the check is exact.
struct BoundCheck {
  std::string label;
  double measured = 0.0;
  double bound = 0.0;
  bool passed = false;
};

BoundCheck make_bound_check(const std::string& label, double measured, double bound);
BoundCheck make_exact_check(const std::string& label, double measured, double bound);

/// A closed-form bound instantiated at concrete parameters, measured on the
/// network itself (parameter count, length, widths, ...).
struct NetBound {
  std::string label;
  std::function<double(const Network&)> measure;
  double bound = 0.0;
  bool exact = false;
};

NetBound param_bound(double bound);
NetBound param_equals(double value);
NetBound length_equals(double value);
NetBound width_bound(std::int64_t layer_index, double bound);
/// Number of mismatching entries against the expected width vector; exact 0.
NetBound dims_equal(std::vector<std::int64_t> expected);

std::vector<BoundCheck> check_bounds(const Network& net, const std::vector<NetBound>& bounds);

/// Max sampled Euclidean distance between the ReLU realization and the
/// oracle; a lower bound on the true sup error, deterministic given the seed.
double estimate_sup_error(const Network& net, const VectorFn& oracle, const Box& domain,
                          std::int64_t samples, std::uint64_t seed);

/// Max sampled difference quotient; a lower bound on the true Lipschitz
/// constant, so any claimed bound it exceeds is genuinely violated.
double estimate_lipschitz(const Network& net, const Box& domain, std::int64_t pair_samples,
                          std::uint64_t seed);

struct Claims {
  std::optional<double> sup_error_bound;
  std::optional<double> lipschitz_bound;
  std::vector<NetBound> bounds;
  std::optional<Box> lipschitz_domain;  // defaults to the verification domain
};

struct VerifyReport {
  double sup_error_estimate = 0.0;
  double lipschitz_estimate = 0.0;
  std::int64_t param_count = 0;
  std::vector<BoundCheck> checks;
  std::int64_t sample_count = 0;
  std::uint64_t seed = 0;

  bool passed() const {
    for (const auto& check : checks)
      if (!check.passed) return false;
    return true;
  }
};

VerifyReport verify(const Network& net, const VectorFn& oracle, const Box& domain,
                    const Claims& claims, std::int64_t samples, std::uint64_t seed);

/// A network shipped with the claims needed to compose it with others.
struct ClaimedNetwork {
  Network net;
  VectorFn oracle;
  double lipschitz = 0.0;
};

/// Builds f2 . I . f1 (caller supplies f1, f2 at the split tolerances
/// eps/(2 L2) and eps/2), recounts the parameter bound
/// P <= 4 d2 (d2+1) + 2 P(f1) + 2 P(f2), and measures the end-to-end error
/// against the composed oracles.  Returned measured value is the worse of
/// the two checks normalized by its bound.
BoundCheck composition_cost_check(const ClaimedNetwork& f1, const ClaimedNetwork& f2,
                                  const Box& domain, const Box& f2_domain, double eps,
                                  std::int64_t samples, std::uint64_t seed);

struct SweepRow {
  std::int64_t d = 0;
  double R = 0.0;
  double eps = 0.0;
  std::int64_t params = 0;
  double sup_error = 0.0;
  double lipschitz = 0.0;
  bool passed = false;
};

struct ExponentFit {
  bool valid = false;
  double exponent = 0.0;
  double residual = 0.0;  // RMS residual of log(params)
};

struct SweepResult {
  std::vector<SweepRow> rows;
  ExponentFit d_fit;    // log(params) against log d, other axes fixed
  ExponentFit eps_fit;  // log(params) against log(1/eps), other axes fixed
  bool all_passed() const {
    for (const auto& row : rows)
      if (!row.passed) return false;
    return !rows.empty();
  }
};

/// Least-squares slope of log(y) against log(x); valid from 3 distinct
/// abscissae.
ExponentFit fit_exponent(const std::vector<double>& xs, const std::vector<double>& ys);

/// One verified cell per (d, R, eps); builder failures abort with the cell
/// coordinates.  Cell seeds derive deterministically from (seed, d, R, eps).
struct CellParams {
  std::int64_t d = 1;
  double R = 1.0;
  double eps = 0.1;
};

using CellBuilder = std::function<Network(const CellParams&)>;
using CellOracle = std::function<VectorFn(const CellParams&)>;
using CellDomain = std::function<Box(const CellParams&)>;
using CellClaims = std::function<Claims(const CellParams&, const Network&)>;

struct SweepPlan {
  CellBuilder build;
  CellOracle oracle;
  CellDomain domain;
  CellClaims claims;
};

SweepResult sweep(const SweepPlan& plan, const std::vector<std::int64_t>& ds,
                  const std::vector<double>& Rs, const std::vector<double>& epss,
                  std::int64_t samples, std::uint64_t seed);

/// CSV report: header d,R,eps,params,sup_error,lipschitz,passed; one row per
/// cell; LF line endings, '.' decimal separator, shortest round-trip reals.
std::string sweep_csv(const SweepResult& result);
void write_sweep_csv(const SweepResult& result, const std::string& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace annc
