#include "radial/ode.hpp"

#include <algorithm>
#include <cmath>

#include "radial/errors.hpp"

namespace radial {

namespace {

// The public tol is a requested accuracy; the controller targets a much
// smaller per-step error so that terminal error scales like tol^3..tol^4 and
// halving tol buys close to an order of magnitude (see README: accuracy
// scaling). The floor keeps the estimate above rounding noise.
double step_eps(double tol) {
  if (!(tol > 0.0)) throw ParamError("integration tolerance must be positive");
  const double e = tol * tol * tol * tol;
  return std::clamp(e, 3e-15, 1e-4);
}

struct Dopri5 {
  // Dormand-Prince 5(4) tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b (5th order) minus bhat (4th order): the embedded error estimate.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

constexpr double kMinStepFloor = 1e-300;
constexpr long kMaxSteps = 20'000'000;

}  // namespace

double DenseSolution::operator()(double x) const {
  auto [a, b] = segment(x);
  const double h = b.x - a.x;
  if (h == 0.0) return a.y;
  const double s = (x - a.x) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * a.y + (s3 - 2 * s2 + s) * h * a.dy +
         (-2 * s3 + 3 * s2) * b.y + (s3 - s2) * h * b.dy;
}

double DenseSolution::derivative(double x) const {
  auto [a, b] = segment(x);
  const double h = b.x - a.x;
  if (h == 0.0) return a.dy;
  const double s = (x - a.x) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * a.y + (3 * s2 - 4 * s + 1) * h * a.dy + (-6 * s2 + 6 * s) * b.y +
          (3 * s2 - 2 * s) * h * b.dy) /
         h;
}

std::pair<DenseSolution::Node, DenseSolution::Node> DenseSolution::segment(double x) const {
  if (nodes_.empty()) throw Error("empty dense solution");
  if (nodes_.size() == 1) return {nodes_.front(), nodes_.front()};
  const bool asc = nodes_.back().x >= nodes_.front().x;
  // Binary search for the segment containing x; ends extrapolate.
  std::size_t lo = 0, hi = nodes_.size() - 1;
  auto before = [asc](double a, double b) { return asc ? a < b : a > b; };
  if (before(x, nodes_.front().x)) return {nodes_[0], nodes_[1]};
  if (before(nodes_.back().x, x)) return {nodes_[nodes_.size() - 2], nodes_.back()};
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (before(x, nodes_[mid].x))
      hi = mid;
    else
      lo = mid;
  }
  return {nodes_[lo], nodes_[hi]};
}

DenseSolution DenseSolution::merge(const DenseSolution& backward, const DenseSolution& forward) {
  DenseSolution out;
  const auto& bn = backward.nodes();
  for (auto it = bn.rbegin(); it != bn.rend(); ++it) out.append(*it);
  const auto& fn = forward.nodes();
  for (std::size_t i = 0; i < fn.size(); ++i) {
    if (i == 0 && !out.empty() && out.nodes().back().x == fn[0].x) continue;
    out.append(fn[i]);
  }
  return out;
}

OdeResult integrate_ode(const std::function<double(double, double)>& f, double x0, double y0,
                        double x1, double tol, const std::function<double(double, double)>& stop) {
  const double eps = step_eps(tol);
  const double dir = (x1 >= x0) ? 1.0 : -1.0;

  auto eval = [&f](double xx, double yy) -> double {
    try {
      const double v = f(xx, yy);
      return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  double x = x0, y = y0;
  const double f0 = eval(x, y);
  if (!std::isfinite(f0)) throw StepFailure("derivative not finite at initial state", x, y);

  OdeResult res;
  res.sol.append({x0, y0, f0});
  res.x_end = x0;
  res.y_end = y0;
  if (x0 == x1) return res;
  if (stop && stop(x0, y0) < 0.0) {
    res.event_stop = true;
    return res;
  }

  double h = dir * std::min(std::abs(x1 - x0) / 16.0,
                            0.1 * (1.0 + std::abs(y0)) / (std::abs(f0) + 1e-12));
  if (h == 0.0) h = dir * 1e-8;
  double err_prev = 1.0;
  double k1 = f0;

  for (long step = 0; step < kMaxSteps; ++step) {
    if (std::abs(h) < std::max(kMinStepFloor,
                               4.0 * std::numeric_limits<double>::epsilon() * std::abs(x)))
      throw StepFailure("step size underflow", x, y);
    bool last = false;
    if ((dir > 0 && x + h >= x1) || (dir < 0 && x + h <= x1)) {
      h = x1 - x;
      last = true;
    }

    const double k2 = eval(x + Dopri5::c2 * h, y + h * Dopri5::a21 * k1);
    const double k3 = eval(x + Dopri5::c3 * h, y + h * (Dopri5::a31 * k1 + Dopri5::a32 * k2));
    const double k4 =
        eval(x + Dopri5::c4 * h, y + h * (Dopri5::a41 * k1 + Dopri5::a42 * k2 + Dopri5::a43 * k3));
    const double k5 = eval(x + Dopri5::c5 * h, y + h * (Dopri5::a51 * k1 + Dopri5::a52 * k2 +
                                                        Dopri5::a53 * k3 + Dopri5::a54 * k4));
    const double k6 = eval(x + h, y + h * (Dopri5::a61 * k1 + Dopri5::a62 * k2 + Dopri5::a63 * k3 +
                                           Dopri5::a64 * k4 + Dopri5::a65 * k5));
    const double y_new = y + h * (Dopri5::b1 * k1 + Dopri5::b3 * k3 + Dopri5::b4 * k4 +
                                  Dopri5::b5 * k5 + Dopri5::b6 * k6);
    const double k7 = eval(x + h, y_new);  // FSAL stage

    if (!std::isfinite(k2) || !std::isfinite(k3) || !std::isfinite(k4) || !std::isfinite(k5) ||
        !std::isfinite(k6) || !std::isfinite(k7) || !std::isfinite(y_new)) {
      h *= 0.3;  // wandered outside the domain of f; retry smaller
      continue;
    }

    const double err_raw = h * (Dopri5::e1 * k1 + Dopri5::e3 * k3 + Dopri5::e4 * k4 +
                                Dopri5::e5 * k5 + Dopri5::e6 * k6 + Dopri5::e7 * k7);
    const double sc = eps * (1.0 + std::max(std::abs(y), std::abs(y_new)));
    const double err = std::abs(err_raw) / sc;
    // PI step control: memory of the previous error keeps the step sequence
    // smooth.
    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.14) * std::pow(err_prev, 0.08);
    fac = std::clamp(fac, 0.2, 5.0);

    if (err > 1.0) {
      h *= std::min(fac, 0.9 * std::pow(err, -0.2));
      continue;
    }

    const double x_prev = x;
    x = last ? x1 : x + h;
    y = y_new;
    res.sol.append({x, y, k7});
    err_prev = std::max(err, 1e-10);

    if (stop && stop(x, y) < 0.0) {
      // Locate the first crossing inside [x_prev, x] on the dense output.
      double a = x_prev, b = x;
      for (int it = 0;
           it < 120 && std::abs(b - a) > 4.0 * std::numeric_limits<double>::epsilon() *
                                             (std::abs(a) + std::abs(b) + 1e-30);
           ++it) {
        const double mid = 0.5 * (a + b);
        if (stop(mid, res.sol(mid)) < 0.0)
          b = mid;
        else
          a = mid;
      }
      res.x_end = a;
      res.y_end = res.sol(a);
      res.event_stop = true;
      res.sol.replace_back({res.x_end, res.y_end, res.sol.derivative(res.x_end)});
      return res;
    }
    if (last) {
      res.x_end = x;
      res.y_end = y;
      return res;
    }
    k1 = k7;
    h *= fac;
  }
  throw StepFailure("step budget exhausted", x, y);
}

namespace {

// Cumulative integral of samples (x_i, g_i) by piecewise quadratic
// (composite Simpson on a possibly nonuniform grid). Returns F with F[0]=0.
std::vector<double> cumulative_quadratic(const std::vector<double>& x,
                                         const std::vector<double>& g) {
  const std::size_t n = x.size();
  std::vector<double> F(n, 0.0);
  if (n < 2) return F;
  if (n == 2) {
    F[1] = 0.5 * (g[0] + g[1]) * (x[1] - x[0]);
    return F;
  }
  // Integral over [xa, xb] of the quadratic through (x0,g0),(x1,g1),(x2,g2).
  auto quad_piece = [](double x0, double x1, double x2, double g0, double g1, double g2,
                       double xa, double xb) {
    const double u0 = x0 - x1, u2 = x2 - x1;
    // g(u) = a + b u + c u^2 with u = x - x1
    const double a = g1;
    const double det = u0 * u2 * (u2 - u0);
    const double b = ((g0 - a) * u2 * u2 - (g2 - a) * u0 * u0) / det;
    const double c = ((g2 - a) * u0 - (g0 - a) * u2) / det;
    const double ua = xa - x1, ub = xb - x1;
    return a * (ub - ua) + 0.5 * b * (ub * ub - ua * ua) + c * (ub * ub * ub - ua * ua * ua) / 3.0;
  };
  // Even rows accumulate over full Simpson pairs (leading-order errors cancel
  // pairwise); odd rows are local half-panel values off the even chain.
  for (std::size_t i = 1; i < n; ++i) {
    if (i % 2 == 0) {
      F[i] = F[i - 2] + quad_piece(x[i - 2], x[i - 1], x[i], g[i - 2], g[i - 1], g[i],
                                   x[i - 2], x[i]);
    } else if (i + 1 < n) {
      F[i] = F[i - 1] + quad_piece(x[i - 1], x[i], x[i + 1], g[i - 1], g[i], g[i + 1],
                                   x[i - 1], x[i]);
    } else {
      F[i] = F[i - 1] + quad_piece(x[i - 2], x[i - 1], x[i], g[i - 2], g[i - 1], g[i],
                                   x[i - 1], x[i]);
    }
  }
  return F;
}

}  // namespace

PotentialTable integrate_y(const RadialMetric& m, double t0, double y0, double t_lo, double t_hi,
                           const IntegrateOptions& opt) {
  if (!(t_lo <= t0 && t0 <= t_hi)) throw ParamError("t0 must lie inside the t span");
  if (!m.contains(y0)) throw DomainError("y0 outside the validity interval");
  if (opt.rows < 2) throw ParamError("need at least 2 table rows");

  auto rhs = [&m](double, double y) { return m.psi(y); };
  double psi_max = m.psi(y0);
  auto stop = [&m, &psi_max](double, double y) {
    if (y < 1e-12) return -1.0;
    if (y <= m.y_lo || y >= m.y_hi) return -1.0;
    double p;
    try {
      p = m.psi(y);
    } catch (const Error&) {
      return -1.0;
    }
    if (!std::isfinite(p)) return -1.0;
    psi_max = std::max(psi_max, p);
    return p - 1e-10 * psi_max;
  };

  PotentialTable table;
  table.t0 = t0;
  table.y0 = y0;

  OdeResult fwd, bwd;
  if (t_hi > t0)
    fwd = integrate_ode(rhs, t0, y0, t_hi, opt.tol, stop);
  else {
    fwd.sol.append({t0, y0, m.psi(y0)});
    fwd.x_end = t0;
    fwd.y_end = y0;
  }
  if (t_lo < t0)
    bwd = integrate_ode(rhs, t0, y0, t_lo, opt.tol, stop);
  else {
    bwd.sol.append({t0, y0, m.psi(y0)});
    bwd.x_end = t0;
    bwd.y_end = y0;
  }

  table.dense = DenseSolution::merge(bwd.sol, fwd.sol);
  table.hit_sup = fwd.event_stop;
  table.hit_inf = bwd.event_stop;
  table.y_sup = fwd.event_stop ? fwd.y_end : std::numeric_limits<double>::infinity();
  table.y_inf = bwd.event_stop ? bwd.y_end : 0.0;

  // Uniform grid anchored at t0; rows near an event boundary are dropped so
  // every emitted y stays strictly between y_inf and y_sup.
  const double delta = (t_hi - t_lo) / (opt.rows - 1);
  const double t_begin = bwd.x_end, t_end = fwd.x_end;
  long nb = (delta > 0.0) ? static_cast<long>(std::floor((t0 - t_begin) / delta + 1e-9)) : 0;
  long nf = (delta > 0.0) ? static_cast<long>(std::floor((t_end - t0) / delta + 1e-9)) : 0;
  if (bwd.event_stop && nb > 0 && t0 - nb * delta <= t_begin) --nb;
  if (fwd.event_stop && nf > 0 && t0 + nf * delta >= t_end) --nf;
  for (long j = -nb; j <= nf; ++j) {
    const double t = t0 + static_cast<double>(j) * delta;
    PotentialRow row;
    row.t = t;
    row.r = std::exp(t);
    row.y = (j == 0) ? y0 : table.dense(t);
    if (j == 0) table.row_t0 = table.rows.size();
    table.rows.push_back(row);
  }
  return table;
}

void reconstruct_potential(PotentialTable& table) {
  const std::size_t n = table.rows.size();
  if (n == 0) return;
  // f'(r) = y/r exactly, and f = int f'(r) dr = int y dt on the t grid.
  std::vector<double> t(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = table.rows[i].t;
    y[i] = table.rows[i].y;
    table.rows[i].f_prime = table.rows[i].y / table.rows[i].r;
  }
  std::vector<double> F = cumulative_quadratic(t, y);
  const double F0 = F[table.row_t0];
  for (std::size_t i = 0; i < n; ++i) table.rows[i].f = F[i] - F0;
}

NumericProfile psi_from_sigma_numeric(const std::function<double(double)>& sigma, int n,
                                      double y0, double psi0, double y_span_lo,
                                      double y_span_hi, double tol) {
  if (!(psi0 > 0.0)) throw ParamError("psi0 must be positive");
  if (!(y0 > 0.0) || !(y_span_lo > 0.0) || !(y_span_lo <= y0 && y0 <= y_span_hi))
    throw ParamError("y span must be positive and contain y0");

  auto rhs = [&sigma, n](double y, double psi) { return sigma(y) - (n - 1) * psi / y; };
  double psi_peak = psi0;
  auto stop = [&psi_peak](double, double psi) {
    if (!std::isfinite(psi)) return -1.0;
    psi_peak = std::max(psi_peak, psi);
    return psi - 1e-10 * psi_peak;
  };

  OdeResult fwd, bwd;
  if (y_span_hi > y0)
    fwd = integrate_ode(rhs, y0, psi0, y_span_hi, tol, stop);
  else {
    fwd.sol.append({y0, psi0, rhs(y0, psi0)});
    fwd.x_end = y0;
  }
  if (y_span_lo < y0)
    bwd = integrate_ode(rhs, y0, psi0, y_span_lo, tol, stop);
  else {
    bwd.sol.append({y0, psi0, rhs(y0, psi0)});
    bwd.x_end = y0;
  }
  NumericProfile prof;
  prof.psi = DenseSolution::merge(bwd.sol, fwd.sol);
  prof.y_lo = bwd.x_end;
  prof.y_hi = fwd.x_end;
  // Positivity fails *at* an event endpoint; shave it so the profile interval
  // carries psi > 0 on its interior.
  if (bwd.event_stop) prof.y_lo += 1e-9 * std::max(1.0, std::abs(prof.y_lo));
  if (fwd.event_stop) prof.y_hi -= 1e-9 * std::max(1.0, std::abs(prof.y_hi));
  if (!(prof.y_lo < prof.y_hi)) throw StepFailure("profile interval collapsed", y0, psi0);
  return prof;
}

std::pair<double, double> domain_probe(const RadialMetric& m, double y_seed) {
  auto psi_or_nan = [&m](double y) -> double {
    try {
      const double p = m.psi(y);
      return std::isfinite(p) ? p : std::numeric_limits<double>::quiet_NaN();
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  if (!(psi_or_nan(y_seed) > 0.0)) throw DomainError("domain_probe: psi(y_seed) must be positive");

  auto bisect_root = [&psi_or_nan](double pos, double bad) {
    // psi(pos) > 0; psi(bad) <= 0 or undefined. 1e-12 relative width.
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (pos + bad);
      if (std::abs(bad - pos) <= 1e-12 * std::max(std::abs(pos), std::abs(bad))) break;
      if (psi_or_nan(mid) > 0.0)
        pos = mid;
      else
        bad = mid;
    }
    return 0.5 * (pos + bad);
  };

  // Walk outward by octaves, sub-sampling each octave so narrow dips of psi
  // are not stepped over.
  auto probe_dir = [&](bool upward) -> double {
    const double limit = upward ? m.y_hi : m.y_lo;
    double good = y_seed;
    for (int oct = 0; oct < 80; ++oct) {
      double next = upward ? good * 2.0 : good * 0.5;
      if (upward && next > limit) next = limit;
      if (!upward && next < limit) next = limit;
      const int sub = 16;
      double last_pos = good;
      for (int i = 1; i <= sub; ++i) {
        const double frac = static_cast<double>(i) / sub;
        const double y = good + (next - good) * frac;
        const double p = psi_or_nan(y);
        if (!(p > 0.0)) return bisect_root(last_pos, y);
        last_pos = y;
      }
      good = next;
      if (good == limit) return limit;
      if (!upward && good < 1e-275) return 0.0;
    }
    return upward ? limit : limit;
  };

  const double lo = probe_dir(false);
  const double hi = probe_dir(true);
  return {lo, hi};
}

}  // namespace radial
