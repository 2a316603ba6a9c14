// Command-line front end: classify profiles, tabulate generalized scalar
// curvatures, evaluate curvature at points, reconstruct potentials, scan for
// sign changes of psi_ddot, verify the intersection identities, and run the
// brute-force oracles.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "radial/cli.hpp"
#include "radial/errors.hpp"

namespace {

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw radial::ParamError("range must be LO:HI, got '" + text + "'");
  auto value = [](const std::string& s) -> double {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    return std::stod(s);
  };
  return {value(text.substr(0, colon)), value(text.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial: curvature and classification toolkit for radial Kahler metrics"};
  app.require_subcommand(1);
  app.footer(radial::kProfileGrammar);

  radial::RunConfig cfg;
  std::string y_range_text, t_range_text;

  auto add_common = [&](CLI::App* sub, bool needs_psi) {
    if (needs_psi) {
      sub->add_option("--psi", cfg.psi_text, "momentum profile psi(y), see grammar below");
      sub->add_option("--dim", cfg.dim, "complex dimension n (psi alone does not determine it)");
    }
    sub->add_option("--y-range", y_range_text, "validity interval LO:HI (default: probed)");
    sub->add_option("--samples", cfg.samples, "grid size")->check(CLI::Range(8, 1 << 20));
    sub->add_option("--tol", cfg.tol, "classification tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "json | csv | text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", cfg.out_path, "write output to a file instead of stdout");
    sub->add_option("--seed", cfg.seed, "seed for randomized commands");
    sub->add_flag("--strict", cfg.strict, "exit 1 on negative results");
  };

  auto* classify = app.add_subcommand("classify", "full family-membership report");
  add_common(classify, true);

  auto* rho = app.add_subcommand("rho", "tabulate generalized scalar curvatures over a grid");
  add_common(rho, true);
  int k_value = 0;
  rho->add_option("--k", k_value, "single k (default: all 1..n)");

  auto* curvature = app.add_subcommand("curvature", "metric/Ricci/Riemann data at a point");
  add_common(curvature, true);
  double y_at = 0.0;
  bool y_at_set = false;
  curvature->add_option("--z", cfg.z_text, "point, comma-separated re[:im] components");
  curvature->add_option("--y-at", y_at, "momentum value y(|z|^2) at the point")
      ->each([&](const std::string&) { y_at_set = true; });
  curvature->add_option("--xi", cfg.xi_text, "direction for holomorphic sectional curvature");

  auto* potential = app.add_subcommand("potential", "integrate y(t) and reconstruct f(r)");
  add_common(potential, true);
  potential->add_option("--y0", cfg.y0, "initial y at t0");
  potential->add_option("--t0", cfg.t0, "anchor t (f(e^t0) = 0)");
  potential->add_option("--t-range", t_range_text, "integration span LO:HI in t = log r");

  auto* scan = app.add_subcommand("scan-hsc", "bracket sign changes of psi_ddot");
  add_common(scan, true);

  auto* verify = app.add_subcommand("verify", "intersection identities / randomized suites");
  add_common(verify, true);
  verify->add_option("--random", cfg.random_draws,
                     "run the seeded randomized suites with N draws each");

  auto* oracle = app.add_subcommand("oracle", "brute-force cross-checks of curvature formulas");
  add_common(oracle, true);
  oracle->add_option("--z", cfg.z_text, "optional site for the determinant oracle");
  oracle->add_option("--y-at", y_at, "y at the site")->each([&](const std::string&) {
    y_at_set = true;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (!y_range_text.empty()) cfg.y_range = parse_range(y_range_text);
    if (!t_range_text.empty()) cfg.t_range = parse_range(t_range_text);
  } catch (const radial::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (k_value > 0) cfg.k = k_value;
  if (y_at_set) cfg.y_at = y_at;

  return radial::dispatch(cfg, std::cout, std::cerr);
}
