#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radial/errors.hpp"

namespace radial {

// One term c * y^p * exp(mu*y). An ExpLaurentExpr is a finite sum of these;
// the class is the closure of every profile manipulated in this library under
// +, *, scaling, d/dy and (partially) antidifferentiation.
struct Term {
  double coeff = 0.0;
  double power = 0.0;
  double rate = 0.0;  // mu in exp(mu*y)
};

// Normalized form: no duplicate (power, rate) keys, no zero coefficients,
// terms sorted by (rate, power) ascending. Powers and rates within 1e-12 of
// an integer are snapped to it at construction, so key comparison is exact.
class ExpLaurentExpr {
 public:
  ExpLaurentExpr() = default;  // the zero expression

  static ExpLaurentExpr constant(double c);
  static ExpLaurentExpr monomial(double coeff, double power, double rate = 0.0);
  static ExpLaurentExpr from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool operator==(const ExpLaurentExpr& other) const;
  bool operator!=(const ExpLaurentExpr& other) const { return !(*this == other); }

 private:
  std::vector<Term> terms_;
};

// Text form. Grammar (whitespace insignificant, leading '-' allowed):
//   expr    := term (("+"|"-") term)* ;
//   term    := factor ("*" factor)* ;
//   factor  := NUMBER | "y" ("^" SNUMBER)? | "exp" "(" SNUMBER "*" "y" ")" ;
//   SNUMBER := ("-")? NUMBER ;   NUMBER := decimal literal.
// Throws SyntaxError with position on malformed input, OverflowError on
// literals outside double range.
ExpLaurentExpr parse(std::string_view text);

// Canonical printer; parse(to_string(e)) == e for every normalized e.
std::string to_string(const ExpLaurentExpr& e);

// Sum of c * y^p * exp(mu*y) in double precision. Throws DomainError when
// y <= 0 and a fractional or negative power is present.
double evaluate(const ExpLaurentExpr& e, double y);

ExpLaurentExpr differentiate(const ExpLaurentExpr& e);

ExpLaurentExpr add(const ExpLaurentExpr& a, const ExpLaurentExpr& b);
ExpLaurentExpr multiply(const ExpLaurentExpr& a, const ExpLaurentExpr& b);
ExpLaurentExpr scale(const ExpLaurentExpr& a, double c);

inline ExpLaurentExpr operator+(const ExpLaurentExpr& a, const ExpLaurentExpr& b) { return add(a, b); }
inline ExpLaurentExpr operator*(const ExpLaurentExpr& a, const ExpLaurentExpr& b) { return multiply(a, b); }
inline ExpLaurentExpr operator*(const ExpLaurentExpr& a, double c) { return scale(a, c); }
inline ExpLaurentExpr operator*(double c, const ExpLaurentExpr& a) { return scale(a, c); }
inline ExpLaurentExpr operator-(const ExpLaurentExpr& a, const ExpLaurentExpr& b) { return add(a, scale(b, -1.0)); }

// e^k by repeated multiplication, k >= 0. Safe for sign-changing e.
ExpLaurentExpr pow_int(const ExpLaurentExpr& e, int k);

// Exact primitive with zero integration constant. Supported terms:
// rate == 0 with power != -1, and rate != 0 with nonnegative integer power
// (repeated integration by parts). Throws UnsupportedTerm otherwise.
ExpLaurentExpr antiderivative(const ExpLaurentExpr& e);

struct Constancy {
  bool constant = false;
  double value = 0.0;  // coefficient of the (0,0) term, 0 if absent
};

// constant(v) iff every term with (power, rate) != (0,0) has |coeff| <= tol_abs.
Constancy constancy_check(const ExpLaurentExpr& e, double tol_abs);

// Coefficients of e in the pure-Laurent basis {y^p : p in powers}. Returns
// the full map (absent powers get 0); nullopt if e has a term outside the
// basis, including any term with rate != 0. Powers must be distinct.
std::optional<std::map<double, double>> laurent_fit(const ExpLaurentExpr& e,
                                                    std::span<const double> powers);

}  // namespace radial
