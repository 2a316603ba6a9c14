#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "radial/classify.hpp"
#include "radial/oracle.hpp"
#include "radial/report.hpp"

namespace radial {

// Parsed command line; dispatch() is the single entry point so runs are fully
// reproducible from a RunConfig value.
struct RunConfig {
  std::string command;  // classify | rho | curvature | potential | scan-hsc | verify | oracle
  std::string psi_text;
  int dim = 0;
  std::optional<int> k;
  std::optional<std::pair<double, double>> y_range;
  int samples = 256;
  double tol = 1e-8;
  std::string format;  // json | csv | text; per-command default when empty
  std::string out_path;
  std::uint64_t seed = 0;
  bool strict = false;
  // potential
  double y0 = 1.0;
  double t0 = 0.0;
  std::pair<double, double> t_range{-2.0, 2.0};
  // curvature / oracle sites: complex vectors "re[:im],re[:im],..."
  std::string z_text;
  std::string xi_text;
  std::optional<double> y_at;
  // verify --random
  int random_draws = 0;
};

// Exit code 0 on success, 1 on negative results (not-a-member, no sign
// change, failing oracle) under --strict (theorem violations always), 2 on
// errors. Output goes to `out`, diagnostics to `err`.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

// Serialization helpers shared by dispatch and the test suite.
Json json_of(const ClassificationReport& rep);
Json json_of(const TheoremReport& rep);
Json json_of(const OracleReport& rep);
Json json_of(const CurvatureSample& s);
Json json_of(const SuiteResult& s);
std::string potential_csv(const PotentialTable& table);

// Grammar reference printed alongside usage errors.
extern const char* kProfileGrammar;

}  // namespace radial
