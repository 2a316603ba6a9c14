#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "radial/geometry.hpp"

namespace radial {

// Piecewise cubic Hermite interpolant over the accepted steps of an
// integration. Monotone node sequence (ascending or descending in x).
class DenseSolution {
 public:
  struct Node {
    double x;
    double y;
    double dy;
  };

  void append(Node n) { nodes_.push_back(n); }
  void replace_back(Node n) { nodes_.back() = n; }
  bool empty() const { return nodes_.empty(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  double x_front() const { return nodes_.front().x; }
  double x_back() const { return nodes_.back().x; }
  double x_min() const { return std::min(x_front(), x_back()); }
  double x_max() const { return std::max(x_front(), x_back()); }

  // Hermite evaluation; clamps to linear extrapolation from the nearest end
  // outside [x_min, x_max].
  double operator()(double x) const;
  double derivative(double x) const;

  // Merge a backward-running solution with a forward one sharing the anchor.
  static DenseSolution merge(const DenseSolution& backward, const DenseSolution& forward);

 private:
  std::pair<Node, Node> segment(double x) const;
  std::vector<Node> nodes_;
};

struct PotentialRow {
  double t;
  double r;  // e^t
  double y;
  double f = 0.0;
  double f_prime = 0.0;
};

// Sampled solution of dy/dt = psi(y) together with the reconstructed radial
// potential. f_prime * r == y on every row by construction.
struct PotentialTable {
  std::vector<PotentialRow> rows;
  double t0 = 0.0;
  double y0 = 0.0;
  std::size_t row_t0 = 0;  // index of the anchor row (t == t0)
  double y_inf = 0.0;      // detected lower endpoint (0 if no obstruction found)
  double y_sup = std::numeric_limits<double>::infinity();
  bool hit_inf = false;  // true when positivity failure was located
  bool hit_sup = false;
  DenseSolution dense;  // y(t) over the realized span
};

struct IntegrateOptions {
  double tol = 1e-6;
  int rows = 513;  // uniform t-grid anchored at t0
};

// Adaptive Dormand-Prince 5(4) solution of dy/dt = psi(y), r = e^t, run in
// both directions from (t0, y0) across t_span. Integration stops early where
// psi drops below 1e-10 of its running maximum or y leaves the validity
// interval; the stopping point is refined by bisection and recorded in
// y_inf / y_sup. Throws StepFailure if the controller underflows the minimum
// step.
PotentialTable integrate_y(const RadialMetric& m, double t0, double y0, double t_lo, double t_hi,
                           const IntegrateOptions& opt = {});

// Fills f (cumulative quadrature of f'(r) dr = y dt, normalized f = 0 at the
// anchor row) and f_prime = y/r.
void reconstruct_potential(PotentialTable& table);

struct NumericProfile {
  DenseSolution psi;  // psi as a function of y
  double y_lo = 0.0;
  double y_hi = 0.0;
};

// Solves d psi/dy = sigma(y) - (n-1) psi/y from (y0, psi0) across y_span,
// truncated to the subinterval where psi stays positive.
NumericProfile psi_from_sigma_numeric(const std::function<double(double)>& sigma, int n,
                                      double y0, double psi0, double y_span_lo,
                                      double y_span_hi, double tol = 1e-6);

// Maximal subinterval of the declared range containing y_seed on which
// psi > 0: geometric expansion, octave subsampling, root bisection to 1e-12
// relative width.
std::pair<double, double> domain_probe(const RadialMetric& m, double y_seed);

// Generic controller used by both integrations: dy/dx = f(x, y).
struct OdeResult {
  DenseSolution sol;
  bool event_stop = false;  // stopped by the event function
  double x_end = 0.0;
  double y_end = 0.0;
};

// Integrates from (x0, y0) to x1 (either direction). `stop` is an event
// function evaluated on accepted states: integration terminates at its first
// sign change to negative values, refined by bisection on the dense output.
OdeResult integrate_ode(const std::function<double(double, double)>& f, double x0, double y0,
                        double x1, double tol,
                        const std::function<double(double, double)>& stop = {});

}  // namespace radial
