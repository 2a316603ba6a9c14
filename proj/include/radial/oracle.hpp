#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "radial/geometry.hpp"
#include "radial/ode.hpp"

namespace radial {

// Result of a brute-force cross-check of a closed-form quantity.
struct OracleReport {
  std::string quantity;
  std::vector<std::string> points;  // human-readable site descriptors
  std::vector<double> reference;    // closed-form values
  std::vector<double> oracle;       // brute-force values
  double max_rel_err = 0.0;         // |oracle - reference| / max(1, |reference|)
  double threshold = 0.0;
  bool pass = false;
};

// rho_1..rho_n recovered from the expansion of det(g + s Ric)/det(g): the
// polynomial is sampled on an s-grid scaled by the spectral radius of
// g^{-1} Ric and its coefficients solved from a Vandermonde system. Throws
// SingularMatrix if det(g) <= 0 at the site.
Eigen::VectorXd rho_det_oracle(const RadialMetric& m, std::span<const Complex> z, double y_at);

// Compares rho_det_oracle against the closed-form rho_k at the given sites.
struct RhoSite {
  std::vector<Complex> z;
  double y_at;
};
OracleReport rho_oracle_report(const RadialMetric& m, const std::vector<RhoSite>& sites,
                               double threshold = 1e-8);

// Finite differences of L(r) = -(n-1) log y - log psi + n log r along a
// potential table, checked against (n - sigma(y))/r on the interior 80% of
// the rows. Requires at least 32 rows.
OracleReport ricci_fd_oracle(const RadialMetric& m, const PotentialTable& table,
                             double threshold = 1e-5);

// Second-order stencil evaluation of the pure axis Riemann component from
// the metric closed form (with y(r') re-integrated locally around r),
// checked against the closed-form psi_ddot psi^2 / r^2. Throws
// StencilOutOfDomain if the stencil leaves the validity interval.
OracleReport riemann_fd_oracle(const RadialMetric& m, double r, double y_at,
                               double threshold = 1e-4);

}  // namespace radial
