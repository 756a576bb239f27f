// Command-line front end: build named constructions, evaluate stored
// networks, verify claims, and run parameter sweeps.
//
// Exit codes: 0 pass, 1 usage error, 2 check failure, 3 I/O error.

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "annc/registry.hpp"
#include "annc/serialize.hpp"

namespace {

using namespace annc;

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailure = 2;
constexpr int kExitIo = 3;

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list of reals");
  return out;
}

std::vector<std::int64_t> parse_ints(const std::string& text) {
  std::vector<std::int64_t> out;
  for (double v : parse_reals(text)) out.push_back(static_cast<std::int64_t>(v));
  return out;
}

std::string dims_string(const Network& net) {
  std::string out = "(";
  const auto widths = dims(net);
  for (std::size_t i = 0; i < widths.size(); ++i)
    out += (i ? "," : "") + std::to_string(widths[i]);
  return out + ")";
}

void print_report(const VerifyReport& report) {
  std::printf("sup_error=%s lipschitz=%s params=%" PRId64 " samples=%" PRId64 " seed=%" PRIu64 "\n",
              format_double(report.sup_error_estimate).c_str(),
              format_double(report.lipschitz_estimate).c_str(), report.param_count,
              report.sample_count, report.seed);
  for (const auto& check : report.checks)
    std::printf("%s %s: measured=%s bound=%s\n", check.passed ? "PASS" : "FAIL",
                check.label.c_str(), format_double(check.measured).c_str(),
                format_double(check.bound).c_str());
}

struct CommonFlags {
  std::int64_t d = 1;
  double R = 1.0;
  double eps = 0.1;
  std::string fns;
  std::string pipeline;
  double clip_u = -1.0;
  double clip_v = 1.0;
};

BuildOptions to_options(const CommonFlags& flags) {
  BuildOptions options;
  if (!flags.fns.empty()) {
    std::size_t pos = 0;
    while (pos < flags.fns.size()) {
      std::size_t next = flags.fns.find(',', pos);
      if (next == std::string::npos) next = flags.fns.size();
      options.fns.push_back(flags.fns.substr(pos, next - pos));
      pos = next + 1;
    }
  }
  options.pipeline = flags.pipeline;
  options.clip_lo = flags.clip_u;
  options.clip_hi = flags.clip_v;
  return options;
}

Network build_named(const std::string& name, const CommonFlags& flags,
                    const std::string& knots_text, const std::string& values_text,
                    const std::string& weights_text, std::int64_t rows, std::int64_t cols,
                    const std::string& bias_text) {
  if (name == "interp") {
    if (knots_text.empty() || values_text.empty())
      throw std::invalid_argument("interp needs --knots and --values");
    return build_interpolation(Grid1D(parse_reals(knots_text), parse_reals(values_text)));
  }
  if (name == "affine") {
    if (weights_text.empty() || rows < 1 || cols < 1)
      throw std::invalid_argument("affine needs --W (row-major), --rows, --cols");
    Matrix w(rows, cols, parse_reals(weights_text));
    Vec b = bias_text.empty() ? Vec(static_cast<std::size_t>(rows), 0.0) : parse_reals(bias_text);
    return affine_net(std::move(w), std::move(b));
  }
  const ConstructionEntry entry = get_construction(name, to_options(flags));
  return entry.plan.build(CellParams{flags.d, flags.R, flags.eps});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constructive ReLU network calculus"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string out_path, net_path, x_text, csv_path;
  std::string knots_text, values_text, weights_text, bias_text;
  std::int64_t rows = 0, cols = 0;
  std::string construction;
  std::uint64_t seed = 0;
  std::int64_t samples = 2000;
  std::string ds_text = "1", Rs_text = "1", epss_text = "0.1";

  auto add_construction_flags = [&](CLI::App* cmd) {
    cmd->add_option("--d", flags.d, "dimension (tree depth k for prod_pow2)");
    cmd->add_option("--R", flags.R, "domain radius");
    cmd->add_option("--eps", flags.eps, "target accuracy");
    cmd->add_option("--fn", flags.fns, "scalar function name(s), comma separated");
    cmd->add_option("--spec", flags.pipeline, "pipeline steps, e.g. cw:sin|rmax|rprod");
    cmd->add_option("--u", flags.clip_u, "clip lower bound");
    cmd->add_option("--v", flags.clip_v, "clip upper bound");
  };

  CLI::App* build_cmd = app.add_subcommand("build", "build a construction and write its JSON");
  build_cmd->add_option("construction", construction, "construction name")->required();
  add_construction_flags(build_cmd);
  build_cmd->add_option("--n", flags.d, "alias of --d for clip width");
  build_cmd->add_option("--knots", knots_text, "interp: knot list");
  build_cmd->add_option("--values", values_text, "interp: value list");
  build_cmd->add_option("--W", weights_text, "affine: row-major weights");
  build_cmd->add_option("--rows", rows, "affine: row count");
  build_cmd->add_option("--cols", cols, "affine: column count");
  build_cmd->add_option("--B", bias_text, "affine: bias list");
  build_cmd->add_option("-o,--out", out_path, "output network path");

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a stored network");
  eval_cmd->add_option("network", net_path, "network JSON path")->required();
  eval_cmd->add_option("--x", x_text, "input vector, comma separated")->required();

  CLI::App* info_cmd = app.add_subcommand("info", "print dims and parameter count");
  info_cmd->add_option("network", net_path, "network JSON path")->required();

  CLI::App* verify_cmd = app.add_subcommand("verify", "build and check a construction's claims");
  verify_cmd->add_option("construction", construction, "construction name")->required();
  add_construction_flags(verify_cmd);
  verify_cmd->add_option("--seed", seed, "sampling seed")->required();
  verify_cmd->add_option("--samples", samples, "sample count");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "verify a construction over a parameter grid");
  sweep_cmd->add_option("construction", construction, "construction name")->required();
  sweep_cmd->add_option("--d", ds_text, "dimension list");
  sweep_cmd->add_option("--R", Rs_text, "radius list");
  sweep_cmd->add_option("--eps", epss_text, "accuracy list");
  sweep_cmd->add_option("--fn", flags.fns, "scalar function name(s)");
  sweep_cmd->add_option("--spec", flags.pipeline, "pipeline steps");
  sweep_cmd->add_option("--seed", seed, "sampling seed")->required();
  sweep_cmd->add_option("--samples", samples, "sample count per cell");
  sweep_cmd->add_option("-o,--out", csv_path, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (build_cmd->parsed()) {
      const Network net =
          build_named(construction, flags, knots_text, values_text, weights_text, rows, cols, bias_text);
      std::printf("dims=%s params=%" PRId64 "\n", dims_string(net).c_str(), param_count(net));
      if (!out_path.empty()) save_network(net, out_path);
      return kExitPass;
    }
    if (eval_cmd->parsed()) {
      const Network net = load_network(net_path);
      const Vec y = realize(net, parse_reals(x_text));
      std::string line;
      for (std::size_t i = 0; i < y.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", y[i]);
        line += (i ? "," : "") + std::string(buf);
      }
      std::printf("%s\n", line.c_str());
      return kExitPass;
    }
    if (info_cmd->parsed()) {
      const Network net = load_network(net_path);
      std::printf("dims=%s params=%" PRId64 " length=%" PRId64 " hidden=%" PRId64 "\n",
                  dims_string(net).c_str(), param_count(net), net.length(), net.hidden_length());
      return kExitPass;
    }
    if (verify_cmd->parsed()) {
      const ConstructionEntry entry = get_construction(construction, to_options(flags));
      const CellParams cell{flags.d, flags.R, flags.eps};
      const Network net = entry.plan.build(cell);
      const VerifyReport report = verify(net, entry.plan.oracle(cell), entry.plan.domain(cell),
                                         entry.plan.claims(cell, net), samples, seed);
      print_report(report);
      return report.passed() ? kExitPass : kExitCheckFailure;
    }
    if (sweep_cmd->parsed()) {
      const ConstructionEntry entry = get_construction(construction, to_options(flags));
      const SweepResult result = sweep(entry.plan, parse_ints(ds_text), parse_reals(Rs_text),
                                       parse_reals(epss_text), samples, seed);
      if (!csv_path.empty()) write_sweep_csv(result, csv_path);
      std::fputs(sweep_csv(result).c_str(), stdout);
      if (result.d_fit.valid)
        std::printf("d_exponent=%s residual=%s\n", format_double(result.d_fit.exponent).c_str(),
                    format_double(result.d_fit.residual).c_str());
      if (result.eps_fit.valid)
        std::printf("eps_exponent=%s residual=%s\n", format_double(result.eps_fit.exponent).c_str(),
                    format_double(result.eps_fit.residual).c_str());
      return result.all_passed() ? kExitPass : kExitCheckFailure;
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    const std::string what = e.what();
    std::fprintf(stderr, "error: %s\n", what.c_str());
    return what.find("cannot open") != std::string::npos || what.find("write failed") != std::string::npos
               ? kExitIo
               : kExitCheckFailure;
  }
  return kExitUsage;
}
