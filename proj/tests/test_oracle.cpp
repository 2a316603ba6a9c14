#include <doctest.h>

#include <cmath>

#include "radial/classify.hpp"
#include "radial/errors.hpp"
#include "radial/oracle.hpp"
#include "radial/random.hpp"

using namespace radial;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<Complex> random_site(Rng& rng, int n) {
  std::vector<Complex> z(n);
  for (auto& zi : z) zi = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  if (std::abs(z[0]) < 0.15) z[0] = Complex(0.8, -0.3);
  return z;
}

// Random exp-Laurent profiles (<= 4 terms) realized on a usable positivity
// interval; rejection keeps drawing until one works.
RadialMetric random_valid_profile(Rng& rng, int n) {
  for (;;) {
    std::vector<Term> ts;
    ts.push_back({rng.uniform(0.5, 1.5), 1, 0});  // keep a linear anchor term
    const int extra = rng.uniform_int(1, 3);
    for (int i = 0; i < extra; ++i) {
      const double rates[] = {-1.0, -0.5, 0.0, 0.0, 0.5};
      ts.push_back({rng.uniform(-0.6, 0.6), static_cast<double>(rng.uniform_int(-3, 3)),
                    rates[rng.uniform_int(0, 4)]});
    }
    try {
      RadialMetric m = metric_from_profile(n, ExpLaurentExpr::from_terms(ts));
      double lo = m.y_lo, hi = m.y_hi;
      if (!std::isfinite(hi)) hi = std::max(8.0, 8.0 * std::max(lo, 1.0));
      if (lo <= 0.0) lo = hi * 1e-4;
      if (hi / lo < 2.0) continue;
      return m;
    } catch (const Error&) {
      continue;
    }
  }
}

}  // namespace

TEST_CASE("rho_det_oracle: flat profile gives vanishing curvatures") {
  for (int n : {1, 2, 4}) {
    const RadialMetric m = make_flat(n);
    Rng rng(5);
    const auto z = random_site(rng, n);
    const Eigen::VectorXd rho = rho_det_oracle(m, z, 0.8);
    for (int k = 0; k < n; ++k) CHECK(std::abs(rho(k)) <= 1e-10);
  }
}

TEST_CASE("rho_det_oracle: dim-1 scalar curvature 2C") {
  const double C = 0.7;
  const ExpLaurentExpr psi = extremal_profile(1, {0.0, 0.0, C, 0.0});
  const RadialMetric m = metric_from_profile(1, psi);
  const std::vector<Complex> z{{0.6, 0.2}};
  const Eigen::VectorXd rho = rho_det_oracle(m, z, 0.5);
  CHECK(rho(0) == doctest::Approx(2.0 * C).epsilon(1e-10));
}

TEST_CASE("rho_det_oracle: constant-sigma family at a random site") {
  const int n = 3;
  const double c = 1.0, d = 0.2;
  const ExpLaurentExpr psi = ExpLaurentExpr::from_terms({{c / n, 1, 0}, {d, 1.0 - n, 0}});
  const RadialMetric m = metric_from_profile(n, psi);
  Rng rng(17);
  const auto z = random_site(rng, n);
  const double y = 1.3;
  const Eigen::VectorXd rho = rho_det_oracle(m, z, y);
  CHECK(std::abs(rho(n - 1)) <= 1e-10);                                      // rho_n = 0
  CHECK(rho(0) == doctest::Approx((n - 1) * (n - c) / y).epsilon(1e-10));    // rho_1
}

TEST_CASE("rho_det_oracle: singular site is rejected") {
  // y_at <= 0 makes the metric block indefinite
  const RadialMetric m = make_symbolic_metric(2, parse("y"), 0, kInf, false);
  const std::vector<Complex> z{{1.0, 0.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(rho_det_oracle(m, z, -1.0), SingularMatrix);
}

TEST_CASE("ricci_fd_oracle: flat, einstein, and cubic profiles") {
  {
    const RadialMetric m = make_flat(2);
    PotentialTable t = integrate_y(m, 0.0, 1.0, -1.0, 1.0, {1e-6, 257});
    const OracleReport rep = ricci_fd_oracle(m, t);
    CHECK(rep.pass);
  }
  {
    // sigma = n - (lambda/2) y with lambda = 1: L'(r) = y/(2r)
    const int n = 3;
    const RadialMetric m = make_ke(n, 1.0);
    PotentialTable t = integrate_y(m, 0.0, 1.0, -1.0, 1.0, {1e-6, 257});
    const OracleReport rep = ricci_fd_oracle(m, t);
    CHECK(rep.pass);
    const YFunction sigma = sigma_from_psi(m);
    for (std::size_t i = 0; i < rep.reference.size(); ++i) CHECK(std::isfinite(rep.oracle[i]));
    // spot check the closed form at the anchor row
    const double y = 1.0, r = 1.0;
    CHECK((n - sigma(y)) / r == doctest::Approx(y / (2.0 * r)).epsilon(1e-12));
  }
  {
    const RadialMetric m = metric_from_profile(2, parse("y - y^2 + y^3"));
    PotentialTable t = integrate_y(m, 0.0, 0.4, -1.5, 1.0, {1e-6, 513});
    const OracleReport rep = ricci_fd_oracle(m, t);
    CHECK(rep.pass);
    CHECK(rep.max_rel_err <= 1e-5);
  }
  {
    const RadialMetric m = make_flat(2);
    PotentialTable t = integrate_y(m, 0.0, 1.0, -0.1, 0.1, {1e-6, 8});
    CHECK_THROWS_AS(ricci_fd_oracle(m, t), ParamError);  // too few rows
  }
}

TEST_CASE("riemann_fd_oracle: flat, cubic interior point, einstein") {
  {
    const OracleReport rep = riemann_fd_oracle(make_flat(2), 1.0, 1.0);
    CHECK(rep.pass);
    CHECK(std::abs(rep.oracle[0]) <= 1e-6);
  }
  {
    // cubic profile at y = 1/2: reference is psi_ddot psi^2 / r^2 with
    // psi_ddot = 1, psi = 3/8
    const RadialMetric m = metric_from_profile(2, parse("y - y^2 + y^3"));
    const OracleReport rep = riemann_fd_oracle(m, 1.0, 0.5);
    CHECK(rep.pass);
    CHECK(rep.reference[0] == doctest::Approx(9.0 / 64.0).epsilon(1e-13));
    CHECK(rep.oracle[0] == doctest::Approx(9.0 / 64.0).epsilon(1e-4));
  }
  {
    const RadialMetric m = make_ke(3, 2.0 * 0.1 * 4.0);  // C = 0.1
    const OracleReport rep = riemann_fd_oracle(m, 1.0, 1.0);
    CHECK(rep.pass);
    CHECK(rep.max_rel_err <= 1e-4);
  }
}

TEST_CASE("oracle equivalence on random profiles") {
  Rng rng(90210);
  int profiles = 0;
  while (profiles < 50) {
    const int n = rng.uniform_int(1, 4);
    const RadialMetric m = random_valid_profile(rng, n);
    const auto grid = default_grid(m, 64);
    ++profiles;

    // determinant expansion vs closed form at random interior sites
    for (int s = 0; s < 16; ++s) {
      const double y = grid[static_cast<std::size_t>(rng.uniform_int(8, 55))];
      const auto z = random_site(rng, n);
      Eigen::VectorXd oracle;
      try {
        oracle = rho_det_oracle(m, z, y);
      } catch (const SingularMatrix&) {
        continue;  // site outside the positivity region of this draw
      }
      for (int k = 1; k <= n; ++k) {
        const double ref = rho_k(m, k)(y);
        CAPTURE(to_string(*m.psi_sym));
        CHECK(std::abs(oracle(k - 1) - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
      }
    }
  }
  CHECK(profiles == 50);
}

TEST_CASE("fd oracles on random profiles") {
  Rng rng(424242);
  int done = 0;
  while (done < 12) {
    const int n = rng.uniform_int(1, 4);
    const RadialMetric m = random_valid_profile(rng, n);
    const auto grid = default_grid(m, 64);
    const double y_mid = grid[32];
    PotentialTable t;
    try {
      t = integrate_y(m, 0.0, y_mid, -0.8, 0.8, {1e-6, 257});
    } catch (const Error&) {
      continue;
    }
    if (t.rows.size() < 64) continue;
    const OracleReport ricci = ricci_fd_oracle(m, t);
    CAPTURE(to_string(*m.psi_sym));
    CHECK(ricci.pass);
    const OracleReport riem = riemann_fd_oracle(m, 1.0, y_mid);
    CHECK(riem.pass);
    ++done;
  }
}
