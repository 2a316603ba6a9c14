#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radial/geometry.hpp"
#include "radial/ode.hpp"

namespace radial {

// psi(y) = y - A/y^{n-1} - B/y^{n-2} - C y^2 - D y^3          (n >= 2)
// psi(y) = (1-B) y - A - C y^2 - D y^3                        (n == 1)
struct ExtremalParams {
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
};

// First-order profile equation of a soliton metric:
//   psi_dot = (mu - (n-1)/y) psi + n - lambda y               (n >= 2)
//   psi_dot = mu psi + (k1 + 1) - lambda y                    (n == 1)
struct KrsParams {
  double mu = 0.0;
  double lambda = 0.0;  // solitonic constant
  double nu = 0.0;      // coefficient of e^{mu y}/y^{n-1}
  double k1 = 0.0;      // n == 1 intercept parameter
};

// sigma(y) = n - y (A_k + B_k / y^n)^{1/k}; rho_k = A_k * C(n,k).
struct KcsckParams {
  int k = 0;
  double A_k = 0.0;
  double B_k = 0.0;
  double rho_k = 0.0;
};

struct ExtremalResult {
  bool member = false;
  ExtremalParams params;
  double residual = std::numeric_limits<double>::infinity();
  bool flat = false;  // A = B = C = D = 0
};

struct KeResult {
  bool member = false;
  double lambda_ke = 0.0;  // Einstein constant: sigma = n - (lambda_ke/2) y
  double residual = std::numeric_limits<double>::infinity();
  bool defined_at_origin = false;  // y_lo = 0 and the A parameter vanishes
  bool space_form = false;
};

struct KrsResult {
  bool member = false;
  KrsParams params;
  double residual = std::numeric_limits<double>::infinity();
  bool trivial = false;           // mu = 0, or nu = 0 with lambda = mu (n >= 2)
  double lambda_solitonic = 0.0;  // equals lambda_ke / 2 on KE members
};

struct KcsckResult {
  bool member = false;
  KcsckParams params;
  double residual = std::numeric_limits<double>::infinity();
};

struct ClassifyOptions {
  double tol = 1e-8;  // relative, against the grid max of the tested quantity
  int samples = 256;
};

ExtremalResult classify_extremal(const RadialMetric& m, const ClassifyOptions& opt = {});
KeResult classify_ke(const RadialMetric& m, const ClassifyOptions& opt = {});
// Throws IllConditioned when the fit is rank-deficient *and* membership
// cannot be decided (residual above tolerance). Degenerate members (e.g. the
// flat profile) resolve through the minimum-norm solution instead.
KrsResult classify_krs(const RadialMetric& m, const ClassifyOptions& opt = {});
KcsckResult classify_kcsck(const RadialMetric& m, int k, const ClassifyOptions& opt = {});

struct ClassificationReport {
  int dim = 0;
  double y_lo = 0.0, y_hi = 0.0;
  ExtremalResult extremal;
  KeResult ke;
  KrsResult krs;
  std::vector<KcsckResult> kcsck;  // k = 1..n
  std::vector<std::string> notes;
};

ClassificationReport classify_all(const RadialMetric& m, const ClassifyOptions& opt = {});

// --- family constructors ------------------------------------------------

ExpLaurentExpr extremal_profile(int n, const ExtremalParams& p);
// Explicit nontrivial soliton profile (mu != 0):
//   psi = nu e^{mu y}/y^{n-1} + (lambda/mu) y
//         + (lambda-mu)/mu^{n+1} sum_{j=0}^{n-1} n!/j! mu^j y^{j+1-n}   (n >= 2)
//   psi = nu e^{mu y} + (lambda/mu) y + lambda/mu^2 - (k1+1)/mu         (n == 1)
ExpLaurentExpr krs_profile(int n, double mu, double lambda, double nu, double k1 = 0.0);
// Closed form of sigma for the same family, obtained by expanding
// y^{1-n} d/dy [y^{n-1} psi]; satisfies sigma - n = mu psi - lambda y exactly.
ExpLaurentExpr krs_sigma_closed_form(int n, double mu, double lambda, double nu, double k1 = 0.0);

// Realizes a symbolic profile as a metric on its maximal positivity interval
// around an automatically located seed. Throws ParamError when psi is nowhere
// positive on [1e-3, 1e3].
RadialMetric metric_from_profile(int n, const ExpLaurentExpr& psi);

RadialMetric make_flat(int n);
RadialMetric make_extremal(int n, const ExtremalParams& p);
// psi = y - (lambda_ke / (2(n+1))) y^2 - A / y^{n-1}
RadialMetric make_ke(int n, double lambda_ke, double A = 0.0);
RadialMetric make_krs(int n, double mu, double lambda, double nu, double k1 = 0.0);
// Numeric profile integrated from sigma(y) = n - y (A_k + B_k y^{-n})^{1/k}.
RadialMetric make_kcsck(int n, int k, double a_k, double b_k, double y0, double psi0,
                        double span_lo = 0.0, double span_hi = 0.0, double tol = 1e-6);

// --- intersection-identity verification ----------------------------------

enum class ImplicationStatus { vacuous, confirmed, violated };

struct Implication {
  std::string name;
  ImplicationStatus status = ImplicationStatus::vacuous;
  std::string detail;
};

struct TheoremReport {
  ClassificationReport classification;
  std::vector<Implication> implications;  // the four intersection identities
  bool any_violation = false;
};

TheoremReport verify_theorem(const RadialMetric& m, const ClassifyOptions& opt = {});

// Seeded randomized suites shared by the test suite and `verify --random`.
struct SuiteResult {
  std::string name;
  int draws = 0;
  int violations = 0;
  std::vector<std::string> failures;
};

SuiteResult suite_extremal_not_krs(int draws, std::uint64_t seed);
SuiteResult suite_kcsck_single_k(int draws, std::uint64_t seed);
SuiteResult suite_kcsck_not_extremal(int draws, std::uint64_t seed);
SuiteResult suite_krs_nonconstant_rho(int draws, std::uint64_t seed);
SuiteResult suite_construct_classify_roundtrip(int draws_per_family, std::uint64_t seed);

// Grid variation test for numeric-profile callables: nonconstant iff
// (max - min) > tol * max(1, max |value|).
bool grid_nonconstant(const std::function<double(double)>& f, const std::vector<double>& grid,
                      double tol);

}  // namespace radial
