#include "radial/classify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "radial/errors.hpp"
#include "radial/random.hpp"

namespace radial {

namespace {

double factorial(int n) {
  double v = 1.0;
  for (int i = 2; i <= n; ++i) v *= i;
  return v;
}

struct LsqFit {
  Eigen::VectorXd x;
  double cond = 0.0;
};

// Minimum-norm least squares with a condition estimate of the design matrix.
LsqFit lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  LsqFit fit;
  fit.cond = (s(s.size() - 1) > 0.0) ? s(0) / s(s.size() - 1)
                                     : std::numeric_limits<double>::infinity();
  svd.setThreshold(1e-13);
  fit.x = svd.solve(b);
  return fit;
}

double grid_max_abs(const std::function<double(double)>& f, const std::vector<double>& grid) {
  double m = 0.0;
  for (double y : grid) m = std::max(m, std::abs(f(y)));
  return m;
}

double max_abs_coeff(const ExpLaurentExpr& e) {
  double m = 0.0;
  for (const Term& t : e.terms()) m = std::max(m, std::abs(t.coeff));
  return m;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

// Locate a positive seed of psi and probe the maximal interval around it.
RadialMetric metric_from_profile(int n, const ExpLaurentExpr& psi) {
  RadialMetric scratch = make_symbolic_metric(n, psi, 0.0,
                                              std::numeric_limits<double>::infinity(), false);
  double seed = 0.0;
  for (int i = 0; i <= 120; ++i) {
    const double y = std::pow(10.0, -3.0 + 6.0 * i / 120.0);
    double p;
    try {
      p = evaluate(psi, y);
    } catch (const Error&) {
      continue;
    }
    if (p > 0.0) {
      seed = y;
      break;
    }
  }
  if (seed == 0.0) throw ParamError("profile is not positive anywhere in [1e-3, 1e3]");
  auto [lo, hi] = domain_probe(scratch, seed);
  return make_symbolic_metric(n, psi, lo, hi);
}

bool grid_nonconstant(const std::function<double(double)>& f, const std::vector<double>& grid,
                      double tol) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, amax = 0.0;
  for (double y : grid) {
    const double v = f(y);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    amax = std::max(amax, std::abs(v));
  }
  return (hi - lo) > tol * std::max(1.0, amax);
}

// ---------------------------------------------------------------------------
// classifiers

ExtremalResult classify_extremal(const RadialMetric& m, const ClassifyOptions& opt) {
  const int n = m.dim;
  ExtremalResult res;
  if (m.symbolic()) {
    std::vector<double> powers = (n >= 2)
                                     ? std::vector<double>{1.0 - n, 2.0 - n, 1.0, 2.0, 3.0}
                                     : std::vector<double>{0.0, 1.0, 2.0, 3.0};
    auto fit = laurent_fit(*m.psi_sym, powers);
    if (!fit) return res;
    if (n >= 2) {
      res.residual = std::abs((*fit)[1.0] - 1.0);
      if (res.residual > opt.tol) return res;
      res.params = {-(*fit)[1.0 - n], -(*fit)[2.0 - n], -(*fit)[2.0], -(*fit)[3.0]};
    } else {
      res.residual = 0.0;
      res.params = {-(*fit)[0.0], 1.0 - (*fit)[1.0], -(*fit)[2.0], -(*fit)[3.0]};
    }
    res.member = true;
  } else {
    const auto grid = default_grid(m, opt.samples);
    const int rows = static_cast<int>(grid.size());
    Eigen::MatrixXd A(rows, 4);
    Eigen::VectorXd b(rows);
    for (int i = 0; i < rows; ++i) {
      const double y = grid[i];
      if (n >= 2) {
        A(i, 0) = std::pow(y, 1.0 - n);
        A(i, 1) = std::pow(y, 2.0 - n);
        A(i, 2) = y * y;
        A(i, 3) = y * y * y;
        b(i) = m.psi(y) - y;  // coefficients are (-A, -B, -C, -D)
      } else {
        A(i, 0) = 1.0;
        A(i, 1) = y;
        A(i, 2) = y * y;
        A(i, 3) = y * y * y;
        b(i) = m.psi(y);  // coefficients are (-A, 1-B, -C, -D)
      }
    }
    const LsqFit fit = lsq(A, b);
    const Eigen::VectorXd r = A * fit.x - b;
    double psi_max = 0.0;
    for (int i = 0; i < rows; ++i) psi_max = std::max(psi_max, std::abs(m.psi(grid[i])));
    res.residual = r.cwiseAbs().maxCoeff();
    if (res.residual > opt.tol * std::max(1.0, psi_max)) return res;
    if (n >= 2)
      res.params = {-fit.x(0), -fit.x(1), -fit.x(2), -fit.x(3)};
    else
      res.params = {-fit.x(0), 1.0 - fit.x(1), -fit.x(2), -fit.x(3)};
    res.member = true;
  }
  const auto& p = res.params;
  res.flat = res.member && std::abs(p.A) <= opt.tol && std::abs(p.B) <= opt.tol &&
             std::abs(p.C) <= opt.tol && std::abs(p.D) <= opt.tol;
  return res;
}

KeResult classify_ke(const RadialMetric& m, const ClassifyOptions& opt) {
  const int n = m.dim;
  KeResult res;
  const YFunction sigma = sigma_from_psi(m);
  if (sigma.symbolic()) {
    const double powers[] = {0.0, 1.0};
    auto fit = laurent_fit(*sigma.sym, powers);
    if (!fit) return res;
    res.residual = std::abs((*fit)[0.0] - n);
    if (res.residual > opt.tol * std::max(1.0, static_cast<double>(n))) return res;
    res.lambda_ke = -2.0 * (*fit)[1.0];
    res.member = true;
  } else {
    const auto grid = default_grid(m, opt.samples);
    const int rows = static_cast<int>(grid.size());
    Eigen::MatrixXd A(rows, 2);
    Eigen::VectorXd b(rows);
    double smax = 0.0;
    for (int i = 0; i < rows; ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = grid[i];
      b(i) = sigma(grid[i]);
      smax = std::max(smax, std::abs(b(i)));
    }
    const LsqFit fit = lsq(A, b);
    const double scale = std::max(1.0, smax);
    const double fit_res = (A * fit.x - b).cwiseAbs().maxCoeff();
    res.residual = std::max(fit_res, std::abs(fit.x(0) - n));
    if (res.residual > opt.tol * scale) return res;
    res.lambda_ke = -2.0 * fit.x(1);
    res.member = true;
  }
  if (res.member) {
    const ExtremalResult ext = classify_extremal(m, opt);
    if (ext.member && n >= 2) {
      // Internal consistency between the two Einstein-constant routes.
      const double expected = 2.0 * ext.params.C * (n + 1);
      if (std::abs(res.lambda_ke - expected) > 1e-6 * std::max(1.0, std::abs(res.lambda_ke)))
        throw Error("einstein constant mismatch between sigma fit and profile parameters");
    }
    res.defined_at_origin = (m.y_lo == 0.0) && ext.member && std::abs(ext.params.A) <= opt.tol;
    res.space_form = res.defined_at_origin;
  }
  return res;
}

KrsResult classify_krs(const RadialMetric& m, const ClassifyOptions& opt) {
  const int n = m.dim;
  KrsResult res;
  const YFunction sigma = sigma_from_psi(m);
  const auto grid = default_grid(m, std::max(opt.samples, 32));
  const int rows = static_cast<int>(grid.size());
  const int unknowns = (n >= 2) ? 2 : 3;

  Eigen::MatrixXd A(rows, unknowns);
  Eigen::VectorXd b(rows);
  double psidot_max = 0.0;
  for (int i = 0; i < rows; ++i) {
    const double y = grid[i];
    const double psi = m.psi(y);
    psidot_max = std::max(psidot_max, std::abs(m.psi_dot(y)));
    if (n >= 2) {
      // sigma - n = mu psi - lambda y
      A(i, 0) = psi;
      A(i, 1) = -y;
      b(i) = sigma(y) - n;
    } else {
      // psi_dot = mu psi + (k1+1) - lambda y
      A(i, 0) = psi;
      A(i, 1) = 1.0;
      A(i, 2) = -y;
      b(i) = m.psi_dot(y);
    }
  }
  const LsqFit fit = lsq(A, b);
  res.residual = (A * fit.x - b).cwiseAbs().maxCoeff();
  const double threshold = opt.tol * (1.0 + psidot_max);
  if (res.residual > threshold) {
    if (fit.cond > 1e12)
      throw IllConditioned("soliton fit is rank-deficient and membership is undecidable");
    return res;
  }
  res.member = true;
  res.params.mu = fit.x(0);
  if (n >= 2) {
    res.params.lambda = fit.x(1);
  } else {
    res.params.k1 = fit.x(1) - 1.0;
    res.params.lambda = fit.x(2);
  }
  res.lambda_solitonic = res.params.lambda;

  if (std::abs(res.params.mu) <= opt.tol) {
    // Explicit-profile formula is singular at mu = 0; the soliton is trivial.
    res.params.mu = 0.0;
    res.params.nu = 0.0;
    res.trivial = true;
    return res;
  }

  const double mu = res.params.mu;
  if (m.symbolic()) {
    const double target_power = 1.0 - n;
    for (const Term& t : m.psi_sym->terms()) {
      if (t.power == target_power && std::abs(t.rate - mu) <= 1e-6 * std::max(1.0, std::abs(mu)))
        res.params.nu = t.coeff;
    }
  } else {
    // One-point solves averaged over mid-grid sites.
    const ExpLaurentExpr part = krs_profile(n, mu, res.params.lambda, 0.0, res.params.k1);
    double acc = 0.0;
    int cnt = 0;
    for (int i = rows / 3; i < rows / 3 + 3 && i < rows; ++i) {
      const double y = grid[i];
      acc += (m.psi(y) - evaluate(part, y)) * std::pow(y, n - 1.0) * std::exp(-mu * y);
      ++cnt;
    }
    res.params.nu = acc / std::max(1, cnt);
  }
  const double nu_scale = std::max(1.0, grid_max_abs([&m](double y) { return m.psi(y); }, grid));
  const bool nu_zero = std::abs(res.params.nu) <= opt.tol * nu_scale;
  if (n >= 2)
    res.trivial = nu_zero && std::abs(res.params.lambda - mu) <= opt.tol * std::max(1.0, std::abs(mu));
  else
    res.trivial = nu_zero;
  return res;
}

KcsckResult classify_kcsck(const RadialMetric& m, int k, const ClassifyOptions& opt) {
  const int n = m.dim;
  if (k < 1 || k > n) throw RangeError("classify_kcsck: k must lie in [1, n]");
  KcsckResult res;
  res.params.k = k;
  const YFunction sigma = sigma_from_psi(m);
  if (sigma.symbolic()) {
    const ExpLaurentExpr q = multiply(
        add(ExpLaurentExpr::constant(static_cast<double>(n)), scale(*sigma.sym, -1.0)),
        ExpLaurentExpr::monomial(1.0, -1.0));
    const ExpLaurentExpr F = pow_int(q, k);
    const double powers[] = {0.0, static_cast<double>(-n)};
    auto fit = laurent_fit(F, powers);
    if (!fit) return res;
    res.params.A_k = (*fit)[0.0];
    res.params.B_k = (*fit)[static_cast<double>(-n)];
    res.residual = 0.0;
    res.member = true;
  } else {
    const auto grid = default_grid(m, opt.samples);
    const int rows = static_cast<int>(grid.size());
    Eigen::MatrixXd A(rows, 2);
    Eigen::VectorXd b(rows);
    double fmax = 0.0;
    for (int i = 0; i < rows; ++i) {
      const double y = grid[i];
      double q = (n - sigma(y)) / y;
      double F = 1.0;
      for (int j = 0; j < k; ++j) F *= q;  // integer power; q may change sign
      A(i, 0) = 1.0;
      A(i, 1) = std::pow(y, static_cast<double>(-n));
      b(i) = F;
      fmax = std::max(fmax, std::abs(F));
    }
    const LsqFit fit = lsq(A, b);
    res.residual = (A * fit.x - b).cwiseAbs().maxCoeff();
    if (res.residual > opt.tol * std::max(1.0, fmax)) return res;
    res.params.A_k = fit.x(0);
    res.params.B_k = fit.x(1);
    res.member = true;
  }
  res.params.rho_k = res.params.A_k * binom(n, k);
  return res;
}

ClassificationReport classify_all(const RadialMetric& m, const ClassifyOptions& opt) {
  ClassificationReport rep;
  rep.dim = m.dim;
  rep.y_lo = m.y_lo;
  rep.y_hi = m.y_hi;
  rep.extremal = classify_extremal(m, opt);
  rep.ke = classify_ke(m, opt);
  try {
    rep.krs = classify_krs(m, opt);
  } catch (const IllConditioned& e) {
    rep.notes.push_back(std::string("soliton fit skipped: ") + e.what());
  }
  for (int k = 1; k <= m.dim; ++k) rep.kcsck.push_back(classify_kcsck(m, k, opt));

  if (rep.extremal.flat) rep.notes.push_back("flat profile (A = B = C = D = 0)");
  if (rep.ke.member && rep.ke.space_form)
    rep.notes.push_back("Einstein metric defined at the origin: complex space form");
  if (rep.krs.member && rep.krs.trivial)
    rep.notes.push_back("soliton is trivial (Einstein): lambda_ke = 2 * lambda_solitonic = " +
                        fmt(2.0 * rep.krs.lambda_solitonic));

  // Nontrivial soliton members get the closed-form sigma consistency record.
  if (rep.krs.member && !rep.krs.trivial && std::abs(rep.krs.params.mu) > opt.tol) {
    const auto& p = rep.krs.params;
    const ExpLaurentExpr psi = krs_profile(m.dim, p.mu, p.lambda, p.nu, p.k1);
    const ExpLaurentExpr sig = krs_sigma_closed_form(m.dim, p.mu, p.lambda, p.nu, p.k1);
    // residual of sigma - n - mu psi + lambda y, identically zero in exact
    // arithmetic
    ExpLaurentExpr resid = add(sig, ExpLaurentExpr::constant(-static_cast<double>(m.dim)));
    resid = add(resid, scale(psi, -p.mu));
    resid = add(resid, ExpLaurentExpr::monomial(p.lambda, 1.0));
    double worst = 0.0;
    for (double y : default_grid(m, 64)) worst = std::max(worst, std::abs(evaluate(resid, y)));
    rep.notes.push_back(
        "soliton sigma closed form: mu*nu*exp(mu*y)/y^(n-1) + n*lambda/mu + "
        "(lambda-mu)/mu^(n+1) * sum_{j=1..n-1} n!/(j-1)! * mu^j * y^(j-n); "
        "defining relation sigma - n = mu*psi - lambda*y holds with max grid residual " +
        fmt(worst) + "; the y^(n-j) exponent variant does not satisfy it");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// family constructors

ExpLaurentExpr extremal_profile(int n, const ExtremalParams& p) {
  std::vector<Term> terms;
  if (n >= 2) {
    terms.push_back({1.0, 1.0, 0.0});
    terms.push_back({-p.A, 1.0 - n, 0.0});
    terms.push_back({-p.B, 2.0 - n, 0.0});
  } else {
    terms.push_back({1.0 - p.B, 1.0, 0.0});
    terms.push_back({-p.A, 0.0, 0.0});
  }
  terms.push_back({-p.C, 2.0, 0.0});
  terms.push_back({-p.D, 3.0, 0.0});
  return ExpLaurentExpr::from_terms(std::move(terms));
}

ExpLaurentExpr krs_profile(int n, double mu, double lambda, double nu, double k1) {
  if (mu == 0.0) throw ParamError("krs profile requires mu != 0 (mu = 0 is the Einstein case)");
  std::vector<Term> terms;
  if (n == 1) {
    terms.push_back({nu, 0.0, mu});
    terms.push_back({lambda / mu, 1.0, 0.0});
    terms.push_back({lambda / (mu * mu) - (k1 + 1.0) / mu, 0.0, 0.0});
  } else {
    terms.push_back({nu, 1.0 - n, mu});
    terms.push_back({lambda / mu, 1.0, 0.0});
    const double pref = (lambda - mu) / std::pow(mu, n + 1);
    for (int j = 0; j <= n - 1; ++j)
      terms.push_back({pref * factorial(n) / factorial(j) * std::pow(mu, j),
                       static_cast<double>(j + 1 - n), 0.0});
  }
  return ExpLaurentExpr::from_terms(std::move(terms));
}

ExpLaurentExpr krs_sigma_closed_form(int n, double mu, double lambda, double nu, double k1) {
  if (mu == 0.0) throw ParamError("closed-form sigma requires mu != 0");
  std::vector<Term> terms;
  if (n == 1) {
    // sigma = psi_dot = mu nu e^{mu y} + lambda/mu
    terms.push_back({mu * nu, 0.0, mu});
    terms.push_back({lambda / mu, 0.0, 0.0});
    (void)k1;
  } else {
    terms.push_back({mu * nu, 1.0 - n, mu});
    terms.push_back({n * lambda / mu, 0.0, 0.0});
    const double pref = (lambda - mu) / std::pow(mu, n + 1);
    for (int j = 1; j <= n - 1; ++j)
      terms.push_back({pref * factorial(n) / factorial(j - 1) * std::pow(mu, j),
                       static_cast<double>(j - n), 0.0});
  }
  return ExpLaurentExpr::from_terms(std::move(terms));
}

RadialMetric make_flat(int n) {
  return make_symbolic_metric(n, ExpLaurentExpr::monomial(1.0, 1.0));
}

RadialMetric make_extremal(int n, const ExtremalParams& p) {
  return metric_from_profile(n, extremal_profile(n, p));
}

RadialMetric make_ke(int n, double lambda_ke, double A) {
  ExtremalParams p;
  p.A = A;
  p.C = lambda_ke / (2.0 * (n + 1));
  return metric_from_profile(n, extremal_profile(n, p));
}

RadialMetric make_krs(int n, double mu, double lambda, double nu, double k1) {
  return metric_from_profile(n, krs_profile(n, mu, lambda, nu, k1));
}

namespace {

// Real k-th root used when reporting sigma in radical form; the radicand must
// be nonnegative for even k.
double radicand_root(double radicand, int k) {
  if (radicand >= 0.0) return std::pow(radicand, 1.0 / k);
  if (k % 2 == 1) return -std::pow(-radicand, 1.0 / k);
  throw SignError("negative radicand under an even-order root");
}

}  // namespace

RadialMetric make_kcsck(int n, int k, double a_k, double b_k, double y0, double psi0,
                        double span_lo, double span_hi, double tol) {
  if (k < 1 || k > n) throw RangeError("make_kcsck: k must lie in [1, n]");
  if (!(y0 > 0.0) || !(psi0 > 0.0)) throw ParamError("make_kcsck: need y0 > 0 and psi0 > 0");
  if (span_lo <= 0.0) span_lo = y0 / 8.0;
  if (span_hi <= 0.0) span_hi = y0 * 8.0;

  // Restrict the span to where the radicand a_k + b_k y^-n stays nonnegative.
  auto radicand = [a_k, b_k, n](double y) { return a_k + b_k * std::pow(y, -static_cast<double>(n)); };
  if (radicand(y0) < 0.0) throw ParamError("make_kcsck: radicand negative at y0");
  if (a_k > 0.0 && b_k < 0.0) {
    const double y_star = std::pow(-b_k / a_k, 1.0 / n);
    span_lo = std::max(span_lo, y_star * (1.0 + 1e-12));
  } else if (a_k < 0.0 && b_k > 0.0) {
    const double y_star = std::pow(b_k / (-a_k), 1.0 / n);
    span_hi = std::min(span_hi, y_star * (1.0 - 1e-12));
  } else if (a_k <= 0.0 && b_k <= 0.0) {
    throw ParamError("make_kcsck: radicand nonpositive everywhere");
  }
  if (!(span_lo < y0 && y0 < span_hi))
    throw ParamError("make_kcsck: y0 outside the admissible span");

  auto sigma = [a_k, b_k, n, k, radicand](double y) {
    return n - y * radicand_root(radicand(y), k);
  };
  NumericProfile prof = psi_from_sigma_numeric(sigma, n, y0, psi0, span_lo, span_hi, tol);
  auto fn = [sol = prof.psi](double y) { return sol(y); };
  return make_numeric_metric(n, fn, prof.y_lo, prof.y_hi);
}

// ---------------------------------------------------------------------------
// intersection identities

namespace {

Implication implication(const std::string& name, bool antecedent, bool consequent,
                        const std::string& detail) {
  Implication imp;
  imp.name = name;
  imp.detail = detail;
  if (!antecedent)
    imp.status = ImplicationStatus::vacuous;
  else
    imp.status = consequent ? ImplicationStatus::confirmed : ImplicationStatus::violated;
  return imp;
}

}  // namespace

TheoremReport verify_theorem(const RadialMetric& m, const ClassifyOptions& opt) {
  TheoremReport rep;
  rep.classification = classify_all(m, opt);
  const auto& c = rep.classification;

  std::vector<int> constant_ks;
  for (const auto& kr : c.kcsck)
    if (kr.member) constant_ks.push_back(kr.params.k);

  const bool two_distinct = constant_ks.size() >= 2;
  bool some_k_above_1 = false;
  for (int k : constant_ks) some_k_above_1 |= (k > 1);

  rep.implications.push_back(implication(
      "extremal_and_soliton_implies_einstein", c.extremal.member && c.krs.member, c.ke.member,
      c.extremal.member && c.krs.member ? "profile is extremal and solves the soliton equation"
                                        : "not in both families"));
  rep.implications.push_back(implication(
      "two_constant_generalized_curvatures_imply_einstein", two_distinct, c.ke.member,
      two_distinct ? "rho_k constant for " + std::to_string(constant_ks.size()) + " values of k"
                   : "fewer than two constant generalized curvatures"));
  rep.implications.push_back(implication(
      "higher_constant_curvature_and_extremal_imply_einstein",
      some_k_above_1 && c.extremal.member, c.ke.member,
      some_k_above_1 && c.extremal.member ? "extremal with rho_k constant for some k > 1"
                                          : "antecedent not satisfied"));
  rep.implications.push_back(implication(
      "constant_generalized_curvature_and_soliton_imply_einstein",
      !constant_ks.empty() && c.krs.member, c.ke.member,
      !constant_ks.empty() && c.krs.member ? "soliton with a constant generalized curvature"
                                           : "antecedent not satisfied"));
  for (const auto& imp : rep.implications)
    rep.any_violation |= (imp.status == ImplicationStatus::violated);
  return rep;
}

// ---------------------------------------------------------------------------
// randomized suites

namespace {

// Try to realize a symbolic profile as a metric with a usable validity
// interval (log-width at least `min_log_width` decades).
std::optional<RadialMetric> try_metric(int n, const ExpLaurentExpr& psi,
                                       double min_log_width = 0.15) {
  try {
    RadialMetric m = metric_from_profile(n, psi);
    double lo = m.y_lo, hi = m.y_hi;
    if (!std::isfinite(hi)) hi = std::max(8.0, 8.0 * std::max(lo, 1.0));
    if (lo <= 0.0) lo = hi * 1e-4;
    if (std::log10(hi / lo) < min_log_width) return std::nullopt;
    return m;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

SuiteResult suite_extremal_not_krs(int draws, std::uint64_t seed) {
  SuiteResult res;
  res.name = "extremal_profiles_reject_soliton_equation";
  Rng rng(seed);
  int attempts = 0;
  while (res.draws < draws && attempts < draws * 200) {
    ++attempts;
    const int n = rng.uniform_int(1, 5);
    ExtremalParams p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                     rng.uniform(-2, 2)};
    if (n == 1) {
      // In dimension one the B parameter folds into the fit intercept, so
      // only D forces non-membership.
      p.B = 0.0;
      if (std::abs(p.D) <= 0.1) continue;
    } else if (std::abs(p.B) + std::abs(p.D) <= 0.1) {
      continue;
    }
    auto m = try_metric(n, extremal_profile(n, p));
    if (!m) continue;
    ++res.draws;
    try {
      const KrsResult kr = classify_krs(*m);
      if (kr.member) {
        ++res.violations;
        res.failures.push_back("n=" + std::to_string(n) + " A=" + fmt(p.A) + " B=" + fmt(p.B) +
                               " C=" + fmt(p.C) + " D=" + fmt(p.D) + " accepted as soliton");
      }
    } catch (const IllConditioned&) {
      // undecidable fit counts as non-membership for this family
    }
  }
  return res;
}

namespace {

struct KcsckDraw {
  int n, k;
  double a_k, b_k, y0, psi0;
  RadialMetric m;
};

std::optional<KcsckDraw> draw_kcsck(Rng& rng, bool require_k_above_1) {
  const int n = rng.uniform_int(2, 5);
  const int k = require_k_above_1 ? rng.uniform_int(2, n) : rng.uniform_int(1, n);
  KcsckDraw d;
  d.n = n;
  d.k = k;
  d.b_k = rng.signed_away_from_zero(0.1, 2.0);
  d.a_k = rng.uniform(-2, 2);
  d.y0 = rng.uniform(0.8, 1.6);
  d.psi0 = rng.uniform(0.4, 1.5);
  try {
    d.m = make_kcsck(n, k, d.a_k, d.b_k, d.y0, d.psi0);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (d.m.y_hi / d.m.y_lo < 1.6) return std::nullopt;  // too thin to test on a grid
  return d;
}

}  // namespace

SuiteResult suite_kcsck_single_k(int draws, std::uint64_t seed) {
  SuiteResult res;
  res.name = "constant_rho_k_profiles_have_nonconstant_rho_h";
  Rng rng(seed);
  int attempts = 0;
  while (res.draws < draws && attempts < draws * 200) {
    ++attempts;
    auto d = draw_kcsck(rng, false);
    if (!d) continue;
    ++res.draws;
    const auto grid = default_grid(d->m, 256);
    for (int h = 1; h <= d->n; ++h) {
      if (h == d->k) continue;
      const YFunction rho = rho_k(d->m, h);
      if (!grid_nonconstant(rho.fn, grid, 1e-4)) {
        ++res.violations;
        res.failures.push_back("n=" + std::to_string(d->n) + " k=" + std::to_string(d->k) +
                               " B_k=" + fmt(d->b_k) + ": rho_" + std::to_string(h) +
                               " looks constant");
      }
    }
  }
  return res;
}

SuiteResult suite_kcsck_not_extremal(int draws, std::uint64_t seed) {
  SuiteResult res;
  res.name = "higher_constant_rho_k_profiles_are_not_extremal";
  Rng rng(seed);
  int attempts = 0;
  while (res.draws < draws && attempts < draws * 200) {
    ++attempts;
    auto d = draw_kcsck(rng, true);
    if (!d) continue;
    ++res.draws;
    const ExtremalResult ext = classify_extremal(d->m);
    if (ext.member) {
      ++res.violations;
      res.failures.push_back("n=" + std::to_string(d->n) + " k=" + std::to_string(d->k) +
                             " B_k=" + fmt(d->b_k) + " accepted as extremal");
    }
  }
  return res;
}

SuiteResult suite_krs_nonconstant_rho(int draws, std::uint64_t seed) {
  SuiteResult res;
  res.name = "nontrivial_solitons_have_no_constant_rho_k";
  Rng rng(seed);
  int attempts = 0;
  while (res.draws < draws && attempts < draws * 400) {
    ++attempts;
    const int n = rng.uniform_int(1, 5);
    const double mu = rng.signed_away_from_zero(0.2, 1.5);
    double lambda, nu;
    if (n >= 2 && rng.uniform01() < 0.5) {
      nu = 0.0;
      lambda = mu + rng.signed_away_from_zero(0.1, 2.0);
    } else {
      nu = rng.signed_away_from_zero(0.1, 2.0);
      lambda = rng.uniform(-2, 2);
    }
    ExpLaurentExpr psi;
    try {
      psi = krs_profile(n, mu, lambda, nu, 0.0);
    } catch (const Error&) {
      continue;
    }
    auto m = try_metric(n, psi);
    if (!m) continue;
    ++res.draws;
    for (int k = 1; k <= n; ++k) {
      const YFunction rho = rho_k(*m, k);
      const double scale = std::max(1.0, max_abs_coeff(*rho.sym));
      if (constancy_check(*rho.sym, 1e-8 * scale).constant) {
        ++res.violations;
        res.failures.push_back("n=" + std::to_string(n) + " mu=" + fmt(mu) + " lambda=" +
                               fmt(lambda) + " nu=" + fmt(nu) + ": rho_" + std::to_string(k) +
                               " constant");
      }
    }
  }
  return res;
}

SuiteResult suite_construct_classify_roundtrip(int draws_per_family, std::uint64_t seed) {
  SuiteResult res;
  res.name = "construct_then_classify_roundtrip";
  Rng rng(seed);
  auto fail = [&res](const std::string& msg) {
    ++res.violations;
    res.failures.push_back(msg);
  };
  auto close = [](double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  };

  // extremal
  for (int i = 0; i < draws_per_family;) {
    const int n = rng.uniform_int(1, 5);
    ExtremalParams p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                     rng.uniform(-2, 2)};
    if (n == 1) p.B = rng.uniform(-0.9, 0.9);  // keep the leading coefficient positive
    auto m = try_metric(n, extremal_profile(n, p));
    if (!m) continue;
    ++i;
    ++res.draws;
    const ExtremalResult got = classify_extremal(*m);
    if (!got.member || !close(got.params.A, p.A, 1e-7) || !close(got.params.B, p.B, 1e-7) ||
        !close(got.params.C, p.C, 1e-7) || !close(got.params.D, p.D, 1e-7))
      fail("extremal roundtrip n=" + std::to_string(n));
    // flags must not depend on the grid resolution
    const bool f128 = classify_extremal(*m, {1e-8, 128}).member;
    const bool f512 = classify_extremal(*m, {1e-8, 512}).member;
    if (f128 != f512) fail("extremal regrid flip n=" + std::to_string(n));
  }

  // soliton
  for (int i = 0; i < draws_per_family;) {
    const int n = rng.uniform_int(1, 5);
    const double mu = rng.signed_away_from_zero(0.1, 2.0);
    const double lambda = rng.uniform(-2, 2);
    const double nu = rng.uniform(-2, 2);
    const double k1 = (n == 1) ? rng.uniform(-1, 1) : 0.0;
    ExpLaurentExpr psi;
    try {
      psi = krs_profile(n, mu, lambda, nu, k1);
    } catch (const Error&) {
      continue;
    }
    auto m = try_metric(n, psi);
    if (!m) continue;
    ++i;
    ++res.draws;
    try {
      const KrsResult got = classify_krs(*m);
      if (!got.member || !close(got.params.mu, mu, 1e-7) ||
          !close(got.params.lambda, lambda, 1e-7) || !close(got.params.nu, nu, 1e-7) ||
          (n == 1 && !close(got.params.k1, k1, 1e-6)))
        fail("soliton roundtrip n=" + std::to_string(n) + " mu=" + fmt(mu));
    } catch (const IllConditioned&) {
      fail("soliton roundtrip ill-conditioned n=" + std::to_string(n));
    }
  }

  // einstein
  for (int i = 0; i < draws_per_family;) {
    const int n = rng.uniform_int(1, 5);
    const double lambda_ke = rng.uniform(-2, 2);
    const double A = rng.uniform(-2, 2);
    RadialMetric m;
    try {
      m = make_ke(n, lambda_ke, A);
    } catch (const Error&) {
      continue;
    }
    ++i;
    ++res.draws;
    const KeResult got = classify_ke(m);
    if (!got.member || !close(got.lambda_ke, lambda_ke, 1e-7))
      fail("einstein roundtrip n=" + std::to_string(n));
  }

  // k-generalized cscK (numeric path)
  for (int i = 0; i < draws_per_family;) {
    auto d = draw_kcsck(rng, false);
    if (!d) continue;
    ++i;
    ++res.draws;
    const KcsckResult got = classify_kcsck(d->m, d->k, {1e-6, 256});
    if (!got.member || !close(got.params.A_k, d->a_k, 1e-6) ||
        !close(got.params.B_k, d->b_k, 1e-6))
      fail("kcsck roundtrip n=" + std::to_string(d->n) + " k=" + std::to_string(d->k));
  }
  return res;
}

}  // namespace radial
