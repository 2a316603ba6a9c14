// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "radial/classify.hpp"
#include "radial/errors.hpp"
#include "radial/oracle.hpp"
#include "radial/random.hpp"

using namespace radial;

namespace {

int g_failures = 0;

void criterion(int num, const char* name, bool pass, const std::string& detail = "") {
  std::printf("%s  criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", num, name,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

template <typename F>
void guarded(int num, const char* name, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    criterion(num, name, false, std::string("exception: ") + e.what());
  }
}

std::vector<Complex> random_site(Rng& rng, int n) {
  std::vector<Complex> z(n);
  for (auto& zi : z) zi = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  if (std::abs(z[0]) < 0.15) z[0] = Complex(0.8, -0.3);
  return z;
}

RadialMetric random_valid_profile(Rng& rng, int n) {
  for (;;) {
    std::vector<Term> ts;
    ts.push_back({rng.uniform(0.5, 1.5), 1, 0});
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

// 1. Cubic extremal profile: exact parameters; single inflection of psi with
//    root at 1/3 and psi(root) = 7/27.
void criterion_cubic_extremal() {
  const RadialMetric m = metric_from_profile(2, parse("y - y^2 + y^3"));
  const ExtremalResult ext = classify_extremal(m);
  const bool params_ok = ext.member && ext.params.A == 0.0 && ext.params.B == 0.0 &&
                         ext.params.C == 1.0 && ext.params.D == -1.0;
  const auto brackets = hsc_sign_scan(m, 0.05, 1.0, 256);
  const bool scan_ok = brackets.size() == 1 &&
                       std::abs(brackets[0].root - 1.0 / 3.0) <= 1e-9 &&
                       std::abs(brackets[0].psi_at_root - 7.0 / 27.0) <= 1e-12 &&
                       brackets[0].psi_positive;
  std::string detail = "A,B,C,D=(" + std::to_string(ext.params.A) + "," +
                       std::to_string(ext.params.B) + "," + std::to_string(ext.params.C) + "," +
                       std::to_string(ext.params.D) + "), " +
                       std::to_string(brackets.size()) + " sign change(s)";
  criterion(1, "cubic extremal profile regression", params_ok && scan_ok, detail);
}

// 2. Dim-3 soliton profile (mu=-1, lambda=1, nu=0): value at y=3, inflection
//    at y=3, classifier parameter recovery.
void criterion_soliton_profile() {
  const RadialMetric m = make_krs(3, -1.0, 1.0, 0.0);
  const bool value_ok = std::abs(m.psi(3.0) - 1.0 / 3.0) <= 1e-12;
  const auto brackets = hsc_sign_scan(m, 1.0, 3.4, 256);
  const bool scan_ok = brackets.size() == 1 && std::abs(brackets[0].root - 3.0) <= 1e-9;
  const KrsResult krs = classify_krs(m);
  const bool fit_ok = krs.member && std::abs(krs.params.mu + 1.0) <= 1e-9 &&
                      std::abs(krs.params.lambda - 1.0) <= 1e-9 &&
                      std::abs(krs.params.nu) <= 1e-9;
  criterion(2, "dim-3 soliton profile regression", value_ok && scan_ok && fit_ok,
            "psi(3)=" + std::to_string(m.psi(3.0)));
}

// 3. Dim-1 quadratic family: scalar curvature 2C via both routes.
void criterion_scalar_curvature_constant() {
  bool ok = true;
  std::string detail;
  Rng rng(33);
  for (double C : {0.3, 0.7, 1.1}) {
    const RadialMetric m = metric_from_profile(1, extremal_profile(1, {0.0, 0.0, C, 0.0}));
    const YFunction r1 = rho_k(m, 1);
    const Constancy cc = constancy_check(*r1.sym, 1e-12);
    const double mid = std::sqrt(m.y_lo > 0 ? m.y_lo * m.y_hi : m.y_hi * 0.25);
    const std::vector<Complex> z{Complex(rng.uniform(0.3, 1.0), rng.uniform(-0.5, 0.5))};
    const Eigen::VectorXd det_rho = rho_det_oracle(m, z, mid);
    ok &= cc.constant && std::abs(cc.value - 2.0 * C) <= 1e-9;
    ok &= std::abs(det_rho(0) - 2.0 * C) <= 1e-9;
    detail += "C=" + std::to_string(C) + ":" + std::to_string(det_rho(0)) + " ";
  }
  criterion(3, "dim-1 scalar curvature equals 2C by formula and by oracle", ok, detail);
}

// 4. Einstein coherence across constants and routes.
void criterion_einstein_coherence() {
  bool ok = true;
  std::string detail;
  Rng rng(44);
  for (double C : {0.2, 0.5}) {
    for (int n : {2, 3, 4}) {
      const double expected = 2.0 * C * (n + 1);
      const RadialMetric m = metric_from_profile(n, extremal_profile(n, {0.0, 0.0, C, 0.0}));
      const KeResult ke = classify_ke(m);
      if (!(ke.member && std::abs(ke.lambda_ke - expected) <= 1e-10)) {
        ok = false;
        detail += "lambda_ke n=" + std::to_string(n) + " ";
      }
      for (int trial = 0; trial < 4; ++trial) {
        const auto z = random_site(rng, n);
        const auto grid = default_grid(m, 16);
        const double y = grid[static_cast<std::size_t>(rng.uniform_int(2, 13))];
        const HermitianMatrix g = metric_components(m, z, y);
        const HermitianMatrix ric = ricci_components(m, z, y);
        const double err = (ric - 0.5 * expected * g).cwiseAbs().maxCoeff();
        if (err > 1e-10 * std::max(1.0, g.cwiseAbs().maxCoeff())) {
          ok = false;
          detail += "components n=" + std::to_string(n) + " ";
        }
      }
      const KrsResult krs = classify_krs(m);
      if (!(krs.member && krs.trivial &&
            std::abs(krs.lambda_solitonic - 0.5 * expected) <= 1e-10)) {
        ok = false;
        detail += "solitonic n=" + std::to_string(n) + " ";
      }
    }
  }
  criterion(4, "einstein constant coherence (sigma fit, components, soliton fit)", ok, detail);
}

// 5. Constant-sigma family: rho_n vanishes, rho_1 does not; d = 0 potential
//    is a pure power of r.
void criterion_constant_sigma_family() {
  const int n = 3;
  const double c = 1.0, d = 0.2;
  const ExpLaurentExpr psi = ExpLaurentExpr::from_terms({{c / n, 1, 0}, {d, 1.0 - n, 0}});
  const RadialMetric m = metric_from_profile(n, psi);
  const auto grid = default_grid(m, 256);
  bool rho3_zero = true;
  const YFunction rho3 = rho_k(m, 3);
  for (double y : grid) rho3_zero &= std::abs(rho3(y)) <= 1e-10;
  const bool rho1_nonconst = grid_nonconstant(rho_k(m, 1).fn, grid, 1e-4);

  const ExpLaurentExpr psi0 = ExpLaurentExpr::monomial(c / n, 1.0);
  const RadialMetric m0 = make_symbolic_metric(n, psi0, 0.0,
                                               std::numeric_limits<double>::infinity(), false);
  PotentialTable t = integrate_y(m0, 0.0, 1.0, -2.0, 2.0, {1e-6, 513});
  reconstruct_potential(t);
  const double beta = n / c;  // y(1) = 1 forces beta = n/c
  double worst = 0.0, scale = 0.0;
  for (const auto& row : t.rows) {
    const double exact = beta * std::pow(row.r, c / n) - beta;
    worst = std::max(worst, std::abs(row.f - exact));
    scale = std::max(scale, std::abs(exact));
  }
  const bool potential_ok = worst <= 1e-7 * scale;
  criterion(5, "constant-sigma family: rho_n = 0, rho_1 nonconstant, power potential",
            rho3_zero && rho1_nonconst && potential_ok,
            "max potential err=" + std::to_string(worst / scale));
}

// 6. Oracle equivalence on 50 random profiles.
void criterion_oracle_equivalence() {
  Rng rng(90210);
  bool ok = true;
  std::string detail;
  int profiles = 0, fd_checked = 0;
  while (profiles < 50) {
    const int n = rng.uniform_int(1, 4);
    const RadialMetric m = random_valid_profile(rng, n);
    const auto grid = default_grid(m, 64);
    ++profiles;
    for (int s = 0; s < 8; ++s) {
      const double y = grid[static_cast<std::size_t>(rng.uniform_int(8, 55))];
      const auto z = random_site(rng, n);
      Eigen::VectorXd oracle;
      try {
        oracle = rho_det_oracle(m, z, y);
      } catch (const SingularMatrix&) {
        continue;
      }
      for (int k = 1; k <= n; ++k) {
        const double ref = rho_k(m, k)(y);
        if (std::abs(oracle(k - 1) - ref) > 1e-8 * std::max(1.0, std::abs(ref))) {
          ok = false;
          detail = "rho mismatch at profile " + std::to_string(profiles);
        }
      }
    }
    if (profiles % 5 == 0) {
      const double y_mid = grid[32];
      try {
        PotentialTable t = integrate_y(m, 0.0, y_mid, -0.8, 0.8, {1e-6, 257});
        if (t.rows.size() >= 64) {
          if (!ricci_fd_oracle(m, t).pass) {
            ok = false;
            detail = "ricci fd fail at profile " + std::to_string(profiles);
          }
          if (!riemann_fd_oracle(m, 1.0, y_mid).pass) {
            ok = false;
            detail = "riemann fd fail at profile " + std::to_string(profiles);
          }
          ++fd_checked;
        }
      } catch (const Error&) {
        // profile too cramped for a table; determinant checks above still ran
      }
    }
  }
  criterion(6, "oracle equivalence on 50 random profiles", ok && fd_checked >= 5,
            detail.empty() ? std::to_string(fd_checked) + " fd tables checked" : detail);
}

// 7. The four seeded intersection-identity suites, 100 draws each.
void criterion_identity_suites() {
  const SuiteResult s1 = suite_extremal_not_krs(100, 101);
  const SuiteResult s2 = suite_kcsck_single_k(100, 102);
  const SuiteResult s3 = suite_kcsck_not_extremal(100, 103);
  const SuiteResult s4 = suite_krs_nonconstant_rho(100, 104);
  bool ok = true;
  std::string detail;
  for (const SuiteResult* s : {&s1, &s2, &s3, &s4}) {
    ok &= (s->draws == 100 && s->violations == 0);
    detail += s->name.substr(0, 24) + "=" + std::to_string(s->violations) + " ";
    if (!s->failures.empty()) detail += "[" + s->failures.front() + "] ";
  }
  criterion(7, "intersection-identity suites (100 draws each, zero violations)", ok, detail);
}

// 8. Integrator accuracy and effective order.
void criterion_ode_accuracy() {
  const RadialMetric flat = make_symbolic_metric(1, parse("y"), 0.0,
                                                 std::numeric_limits<double>::infinity(), false);
  const RadialMetric logistic = make_symbolic_metric(1, parse("y - y^2"), 0.0, 1.0, false);

  auto terminal_error = [](const RadialMetric& m, double y0, double t_end, double exact,
                           double tol) {
    const PotentialTable t = integrate_y(m, 0.0, y0, std::min(0.0, t_end),
                                         std::max(0.0, t_end), {tol, 9});
    const double got = (t_end >= 0 ? t.rows.back().y : t.rows.front().y);
    return std::abs(got - exact) / std::abs(exact);
  };

  const double e_flat = terminal_error(flat, 1.0, 5.0, std::exp(5.0), 1e-4);
  const double e_logi =
      terminal_error(logistic, 0.5, 5.0, 1.0 / (1.0 + std::exp(-5.0)), 1e-4);
  const double e_logi_b =
      terminal_error(logistic, 0.5, -5.0, 1.0 / (1.0 + std::exp(5.0)), 1e-4);
  const bool accurate = e_flat <= 1e-9 && e_logi <= 1e-9 && e_logi_b <= 1e-9;

  const double r1a = terminal_error(flat, 1.0, 5.0, std::exp(5.0), 2e-3);
  const double r1b = terminal_error(flat, 1.0, 5.0, std::exp(5.0), 1e-3);
  const double r2a = terminal_error(logistic, 0.5, 5.0, 1.0 / (1.0 + std::exp(-5.0)), 2e-3);
  const double r2b = terminal_error(logistic, 0.5, 5.0, 1.0 / (1.0 + std::exp(-5.0)), 1e-3);
  const bool order_ok = (r1b * 8.0 <= r1a) && (r2b * 8.0 <= r2a);

  criterion(8, "integrator matches closed forms at 1e-9; halving tol gains >= 8x",
            accurate && order_ok,
            "exp err=" + std::to_string(e_flat) + " ratios=" + std::to_string(r1a / r1b) + "," +
                std::to_string(r2a / r2b));
}

// 9. Soliton sigma closed form satisfies its defining relation; the
//    discrepancy with the alternative exponent convention is recorded in the
//    report notes (informational).
void criterion_soliton_sigma_record() {
  bool ok = true;
  std::string detail;
  struct Case {
    int n;
    double mu, lambda, nu;
  };
  for (const Case c : {Case{2, -1.0, 1.0, 0.3}, Case{3, -1.0, 1.0, 0.0}, Case{4, 0.7, -0.5, 0.4},
                       Case{3, -0.6, 1.2, -0.8}}) {
    const ExpLaurentExpr psi = krs_profile(c.n, c.mu, c.lambda, c.nu);
    const ExpLaurentExpr sig = krs_sigma_closed_form(c.n, c.mu, c.lambda, c.nu);
    ExpLaurentExpr resid = add(sig, ExpLaurentExpr::constant(-static_cast<double>(c.n)));
    resid = add(resid, scale(psi, -c.mu));
    resid = add(resid, ExpLaurentExpr::monomial(c.lambda, 1.0));
    for (int i = 0; i <= 64; ++i) {
      const double y = 0.25 + 4.0 * i / 64.0;
      if (std::abs(evaluate(resid, y)) > 1e-12) {
        ok = false;
        detail += "residual n=" + std::to_string(c.n) + " ";
        break;
      }
    }
  }
  // the classification report of a nontrivial soliton documents the record
  const TheoremReport rep = verify_theorem(make_krs(3, -1.0, 1.0, 0.5));
  bool note_found = false;
  for (const auto& note : rep.classification.notes)
    note_found |= note.find("y^(n-j) exponent variant") != std::string::npos;
  criterion(9, "soliton sigma closed form verified and recorded in report notes",
            ok && note_found, detail);
}

}  // namespace

int main() {
  guarded(1, "cubic extremal profile regression", criterion_cubic_extremal);
  guarded(2, "dim-3 soliton profile regression", criterion_soliton_profile);
  guarded(3, "dim-1 scalar curvature equals 2C", criterion_scalar_curvature_constant);
  guarded(4, "einstein constant coherence", criterion_einstein_coherence);
  guarded(5, "constant-sigma family", criterion_constant_sigma_family);
  guarded(6, "oracle equivalence", criterion_oracle_equivalence);
  guarded(7, "intersection-identity suites", criterion_identity_suites);
  guarded(8, "integrator accuracy and order", criterion_ode_accuracy);
  guarded(9, "soliton sigma record", criterion_soliton_sigma_record);
  std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
  return g_failures == 0 ? 0 : 1;
}
