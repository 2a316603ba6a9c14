#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "radial/expr.hpp"

namespace radial {

using Complex = std::complex<double>;
// Hermitian by construction everywhere it is produced in this library.
using HermitianMatrix = Eigen::MatrixXcd;

// A function of the momentum variable y, carried either as an exact
// expression or as a numeric callable (or both: symbolic carriers always have
// a usable callable).
struct YFunction {
  std::optional<ExpLaurentExpr> sym;
  std::function<double(double)> fn;

  bool symbolic() const { return sym.has_value(); }
  double operator()(double y) const { return fn(y); }
};

// A radial metric in complex dimension `dim`, described by its momentum
// profile psi(y) on the open interval (y_lo, y_hi) where y > 0 and psi > 0.
struct RadialMetric {
  int dim = 1;
  std::optional<ExpLaurentExpr> psi_sym;
  std::optional<ExpLaurentExpr> psi_dot_sym;   // cached d/dy
  std::optional<ExpLaurentExpr> psi_ddot_sym;  // cached d2/dy2
  std::function<double(double)> psi_fn;
  double y_lo = 0.0;
  double y_hi = std::numeric_limits<double>::infinity();

  bool symbolic() const { return psi_sym.has_value(); }
  double psi(double y) const { return psi_fn(y); }
  // Symbolic metrics differentiate exactly; numeric ones use central
  // differences with relative steps 1e-6 (first) and 1e-4 (second).
  double psi_dot(double y) const;
  double psi_ddot(double y) const;
  bool contains(double y) const { return y > y_lo && y < y_hi; }
};

// Factories. With validate=true, psi > 0 is checked on the default grid.
RadialMetric make_symbolic_metric(int dim, ExpLaurentExpr psi, double y_lo = 0.0,
                                  double y_hi = std::numeric_limits<double>::infinity(),
                                  bool validate = true);
RadialMetric make_numeric_metric(int dim, std::function<double(double)> psi, double y_lo,
                                 double y_hi, bool validate = true);

// Default evaluation grid: `samples` log-spaced points over the central 90%
// (in log scale) of the metric's validity interval, with infinite/zero ends
// replaced by finite effective bounds.
std::vector<double> default_grid(const RadialMetric& m, int samples = 256);

// sigma(y) = psi_dot(y) + (n-1) psi(y)/y, i.e. y^{1-n} d/dy [y^{n-1} psi].
YFunction sigma_from_psi(const RadialMetric& m);

// d sigma / dy, assembled from psi_dot/psi_ddot so numeric profiles never
// difference a difference.
YFunction sigma_dot_from_psi(const RadialMetric& m);

// k-generalized scalar curvature, 1 <= k <= n:
//   rho_k = ((n-sigma)/y)^{k-1} [ C(n-1,k) (n-sigma)/y - C(n-1,k-1) sigma_dot ]
// with C(n-1,n) = 0, so k = n reduces to -sigma_dot ((n-sigma)/y)^{n-1}.
// Integer powers are formed by repeated multiplication. Throws RangeError if
// k is outside [1, n].
YFunction rho_k(const RadialMetric& m, int k);

// Component matrices at a point z with |z|^2 = r > 0 and y(r) = y_at supplied
// by the caller. Throws DomainError at r = 0.
HermitianMatrix metric_components(const RadialMetric& m, std::span<const Complex> z, double y_at);
HermitianMatrix ricci_components(const RadialMetric& m, std::span<const Complex> z, double y_at);

// Nonvanishing Riemann components at axis points p = (z1, 0, ..., 0),
// |z1|^2 = r. R_iijj (i != j, both >= 2) equals riiii / 2.
struct RiemannAxis {
  double r1111 = 0.0;  // psi_ddot psi^2 / r^2
  double r11ii = 0.0;  // (psi_dot y - psi) / (y r^2)
  double riiii = 0.0;  // 2 (psi - y) / r^2
};
RiemannAxis riemann_axis(const RadialMetric& m, double r, double y_at);

// Holomorphic sectional curvature R(Z, Zbar, Z, Zbar) at an axis point for
// Z = sum_k xi_k d/dz_k; raw tensor value, not normalized by |Z|^4.
double hsc(const RadialMetric& m, double r, double y_at, std::span<const Complex> xi);

struct SignChange {
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double root = 0.0;
  double psi_at_root = 0.0;
  bool psi_positive = false;
};

// Sign changes of psi_ddot on [y_lo, y_hi] (sampled on a `samples`-point
// grid, each bracket refined by bisection to machine width).
std::vector<SignChange> hsc_sign_scan(const RadialMetric& m, double y_lo, double y_hi,
                                      int samples);

// Bundled per-point curvature data (CLI `curvature` command).
struct CurvatureSample {
  std::vector<Complex> point;
  HermitianMatrix g;
  HermitianMatrix ric;
  RiemannAxis riemann;
  bool riemann_valid = false;  // only at axis points (z1, 0, ..., 0)
  double hsc_value = 0.0;
  bool hsc_valid = false;
  std::vector<Complex> xi;
};
CurvatureSample curvature_sample(const RadialMetric& m, std::span<const Complex> z, double y_at,
                                 std::span<const Complex> xi);

// C(n, k) with out-of-range k mapping to 0.
double binom(int n, int k);

}  // namespace radial
