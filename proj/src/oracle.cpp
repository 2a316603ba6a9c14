#include "radial/oracle.hpp"

#include <cmath>
#include <sstream>

#include "radial/errors.hpp"

namespace radial {

namespace {

double rel_err(double oracle, double reference) {
  return std::abs(oracle - reference) / std::max(1.0, std::abs(reference));
}

std::string describe_site(std::span<const Complex> z, double y_at) {
  std::ostringstream os;
  os.precision(6);
  os << "z=(";
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) os << ",";
    os << z[i].real();
    if (z[i].imag() != 0.0) os << (z[i].imag() > 0 ? "+" : "") << z[i].imag() << "i";
  }
  os << ") y=" << y_at;
  return os.str();
}

void finalize(OracleReport& rep) {
  rep.max_rel_err = 0.0;
  for (std::size_t i = 0; i < rep.reference.size(); ++i)
    rep.max_rel_err = std::max(rep.max_rel_err, rel_err(rep.oracle[i], rep.reference[i]));
  rep.pass = rep.max_rel_err <= rep.threshold;
}

}  // namespace

Eigen::VectorXd rho_det_oracle(const RadialMetric& m, std::span<const Complex> z, double y_at) {
  const int n = m.dim;
  const HermitianMatrix g = metric_components(m, z, y_at);
  const HermitianMatrix ric = ricci_components(m, z, y_at);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(g);
  const double det_g = lu.determinant().real();
  if (!(det_g > 0.0)) throw SingularMatrix("det(g) <= 0: not a metric site");

  // Scale the s grid by the spectral radius of g^{-1} Ric so the sampled
  // polynomial values stay O(1).
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(ric, g);
  const double spec = ges.eigenvalues().cwiseAbs().maxCoeff();

  double h = 0.5 / std::max(1.0, spec);
  for (int attempt = 0; attempt < 2; ++attempt) {
    // P(s_j) at s_j = j h, solved against the integer-node Vandermonde in
    // u = s/h; the true coefficients are recovered as c_k = chat_k / h^k.
    Eigen::MatrixXd V(n + 1, n + 1);
    Eigen::VectorXd p(n + 1);
    for (int j = 0; j <= n; ++j) {
      double u = 1.0;
      for (int k = 0; k <= n; ++k) {
        V(j, k) = u;
        u *= static_cast<double>(j);
      }
      const double s = j * h;
      p(j) = (Eigen::PartialPivLU<Eigen::MatrixXcd>(g + s * ric).determinant().real()) / det_g;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(n);
    if (cond > 1e6 && attempt == 0) {
      h *= 0.5;  // re-scale once and retry
      continue;
    }
    const Eigen::VectorXd chat = svd.solve(p);
    Eigen::VectorXd rho(n);
    double hk = 1.0;
    for (int k = 1; k <= n; ++k) {
      hk *= h;
      rho(k - 1) = chat(k) / hk;
    }
    return rho;
  }
  throw IllConditioned("vandermonde system remained ill-conditioned after rescaling");
}

OracleReport rho_oracle_report(const RadialMetric& m, const std::vector<RhoSite>& sites,
                               double threshold) {
  OracleReport rep;
  rep.quantity = "rho_k_det_expansion";
  rep.threshold = threshold;
  for (const auto& site : sites) {
    const Eigen::VectorXd oracle = rho_det_oracle(m, site.z, site.y_at);
    for (int k = 1; k <= m.dim; ++k) {
      rep.points.push_back(describe_site(site.z, site.y_at) + " k=" + std::to_string(k));
      rep.reference.push_back(rho_k(m, k)(site.y_at));
      rep.oracle.push_back(oracle(k - 1));
    }
  }
  finalize(rep);
  return rep;
}

OracleReport ricci_fd_oracle(const RadialMetric& m, const PotentialTable& table,
                             double threshold) {
  const std::size_t rows = table.rows.size();
  if (rows < 32) throw ParamError("ricci_fd_oracle: table must have at least 32 rows");
  OracleReport rep;
  rep.quantity = "ricci_potential_derivative";
  rep.threshold = threshold;

  const int n = m.dim;
  std::vector<double> L(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = table.rows[i];
    L[i] = -(n - 1) * std::log(row.y) - std::log(m.psi(row.y)) + n * row.t;
  }
  // Uniform t spacing lets dL/dt use the five-point fourth-order stencil;
  // L'(r) = (dL/dt)/r.
  const double dt = table.rows[1].t - table.rows[0].t;
  bool uniform = true;
  for (std::size_t i = 1; i + 1 < rows; ++i)
    uniform &= std::abs((table.rows[i + 1].t - table.rows[i].t) - dt) < 1e-9 * std::abs(dt);

  const YFunction sigma = sigma_from_psi(m);
  const std::size_t lo = std::max<std::size_t>(2, rows / 10);
  const std::size_t hi = rows - std::max<std::size_t>(2, rows / 10);
  for (std::size_t i = lo; i < hi; ++i) {
    const auto& row = table.rows[i];
    double dLdt;
    if (uniform) {
      dLdt = (L[i - 2] - 8.0 * L[i - 1] + 8.0 * L[i + 1] - L[i + 2]) / (12.0 * dt);
    } else {
      const double hl = table.rows[i].t - table.rows[i - 1].t;
      const double hr = table.rows[i + 1].t - table.rows[i].t;
      dLdt = (hl * hl * L[i + 1] + (hr * hr - hl * hl) * L[i] - hr * hr * L[i - 1]) /
             (hl * hr * (hl + hr));
    }
    rep.points.push_back("t=" + std::to_string(row.t));
    rep.oracle.push_back(dLdt / row.r);
    rep.reference.push_back((n - sigma(row.y)) / row.r);
  }
  finalize(rep);
  return rep;
}

OracleReport riemann_fd_oracle(const RadialMetric& m, double r, double y_at, double threshold) {
  if (!(r > 0.0)) throw DomainError("riemann_fd_oracle: r must be positive");
  if (!m.contains(y_at)) throw DomainError("riemann_fd_oracle: y outside validity interval");

  OracleReport rep;
  rep.quantity = "riemann_axis_1111";
  rep.threshold = threshold;

  const double a = std::sqrt(r);  // axis point z = (a, 0, ..., 0)
  const double h = 1e-4 * a;
  const double t_c = std::log(r);

  // Local dense solution of dy/dt = psi(y) around t_c, wide enough for the
  // 5x5 stencil (|dz| <= 2h perturbs t by about 4h/a).
  const double t_pad = 16.0 * h / a + 1e-6;
  auto rhs = [&m](double, double y) { return m.psi(y); };
  OdeResult fwd = integrate_ode(rhs, t_c, y_at, t_c + t_pad, 1e-4);
  OdeResult bwd = integrate_ode(rhs, t_c, y_at, t_c - t_pad, 1e-4);
  const DenseSolution y_of_t = DenseSolution::merge(bwd.sol, fwd.sol);

  auto g11 = [&](double dx, double dy) {
    // On the z1 axis plane the metric entry reduces to psi(y(r'))/r'.
    const double rp = (a + dx) * (a + dx) + dy * dy;
    const double tp = std::log(rp);
    if (tp < y_of_t.x_min() - 1e-12 || tp > y_of_t.x_max() + 1e-12)
      throw StencilOutOfDomain("stencil radius left the locally integrated patch");
    const double yp = y_of_t(tp);
    if (!m.contains(yp)) throw StencilOutOfDomain("stencil left the validity interval");
    return m.psi(yp) / rp;
  };

  // 5x5 stencil values (only the two axes and the center are consumed by the
  // fourth-order formulas below).
  double v[5][5];
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) v[i + 2][j + 2] = g11(i * h, j * h);

  auto d2 = [&](bool along_x) {
    auto f = [&](int k) { return along_x ? v[k + 2][2] : v[2][k + 2]; };
    return (-f(-2) + 16 * f(-1) - 30 * f(0) + 16 * f(1) - f(2)) / (12.0 * h * h);
  };
  auto d1 = [&](bool along_x) {
    auto f = [&](int k) { return along_x ? v[k + 2][2] : v[2][k + 2]; };
    return (f(-2) - 8 * f(-1) + 8 * f(1) - f(2)) / (12.0 * h);
  };

  const double lap = d2(true) + d2(false);          // 4 d^2/dz dzbar
  const Complex dz = 0.5 * Complex(d1(true), -d1(false));  // d/dz1
  const double g_c = v[2][2];
  // Curvature orientation fixed so the flat profile gives zero and the pure
  // axis component matches psi_ddot psi^2 / r^2 (mixed-index products vanish
  // at the axis for m >= 2, so only the 1-1 inverse entry contributes).
  const double fd = 0.25 * lap - std::norm(dz) / g_c;

  rep.points.push_back("r=" + std::to_string(r) + " y=" + std::to_string(y_at));
  rep.oracle.push_back(fd);
  rep.reference.push_back(riemann_axis(m, r, y_at).r1111);
  finalize(rep);
  return rep;
}

}  // namespace radial
