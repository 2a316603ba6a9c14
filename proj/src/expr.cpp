#include "radial/expr.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace radial {

namespace {

constexpr double kSnapTol = 1e-12;   // snap powers/rates to nearby integers
constexpr double kDropRel = 1e-14;   // relative coefficient drop threshold

double snap(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= kSnapTol) return r == 0.0 ? 0.0 : r;  // kill -0
  return x;
}

bool is_integer(double x) { return x == std::round(x); }

// Merge terms sharing a (rate, power) key. Per-key addends are summed in a
// sorted order so the result does not depend on input term order (this is
// what makes multiply commutative at the term-list level).
std::vector<Term> normalize(std::vector<Term> in) {
  std::map<std::pair<double, double>, std::vector<double>> buckets;
  for (Term& t : in) {
    t.power = snap(t.power);
    t.rate = snap(t.rate);
    if (!std::isfinite(t.coeff) || !std::isfinite(t.power) || !std::isfinite(t.rate))
      throw OverflowError("non-finite term produced during expression arithmetic");
    if (t.coeff == 0.0) continue;
    buckets[{t.rate, t.power}].push_back(t.coeff);
  }
  std::vector<Term> out;
  out.reserve(buckets.size());
  double max_abs = 0.0;
  for (auto& [key, addends] : buckets) {
    // Largest magnitudes first so exactly opposite pairs cancel before
    // smaller contributions are folded in.
    std::sort(addends.begin(), addends.end(), [](double a, double b) {
      const double aa = std::abs(a), ab = std::abs(b);
      if (aa != ab) return aa > ab;
      return a < b;
    });
    double c = 0.0;
    for (double a : addends) c += a;
    if (c == 0.0) continue;
    out.push_back({c, key.second, key.first});
    max_abs = std::max(max_abs, std::abs(c));
  }
  // Absorb cancellation residue left behind by differentiation/multiplication
  // chains.
  std::erase_if(out, [max_abs](const Term& t) { return std::abs(t.coeff) < kDropRel * max_abs; });
  return out;
}

}  // namespace

ExpLaurentExpr ExpLaurentExpr::constant(double c) { return monomial(c, 0.0, 0.0); }

ExpLaurentExpr ExpLaurentExpr::monomial(double coeff, double power, double rate) {
  return from_terms({Term{coeff, power, rate}});
}

ExpLaurentExpr ExpLaurentExpr::from_terms(std::vector<Term> terms) {
  ExpLaurentExpr e;
  e.terms_ = normalize(std::move(terms));
  return e;
}

bool ExpLaurentExpr::operator==(const ExpLaurentExpr& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& a = terms_[i];
    const Term& b = other.terms_[i];
    if (a.coeff != b.coeff || a.power != b.power || a.rate != b.rate) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over the grammar in the header.

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExpLaurentExpr run() {
    std::vector<Term> terms;
    skip_ws();
    double sign = 1.0;
    if (peek() == '-') {
      ++pos_;
      sign = -1.0;
    }
    terms.push_back(parse_term(sign));
    skip_ws();
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        terms.push_back(parse_term(c == '-' ? -1.0 : 1.0));
        skip_ws();
      } else {
        throw SyntaxError("expected '+' or '-' between terms", pos_);
      }
    }
    return ExpLaurentExpr::from_terms(std::move(terms));
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool starts_number() const {
    char c = peek();
    return (c >= '0' && c <= '9') || c == '.';
  }

  double parse_number() {
    skip_ws();
    if (!starts_number()) throw SyntaxError("expected a number", pos_);
    // strtod on a NUL-terminated copy of the tail; it consumes the longest
    // valid literal and leaves e.g. the 'e' of a following "exp" alone.
    std::string tail(text_.substr(pos_));
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(tail.c_str(), &end);
    if (end == tail.c_str()) throw SyntaxError("malformed number", pos_);
    if (errno == ERANGE && std::abs(v) == HUGE_VAL)
      throw OverflowError("numeric literal outside double range at position " + std::to_string(pos_));
    pos_ += static_cast<std::size_t>(end - tail.c_str());
    return v;
  }

  double parse_signed_number() {
    skip_ws();
    double sign = 1.0;
    if (peek() == '-') {
      ++pos_;
      sign = -1.0;
    }
    return sign * parse_number();
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) throw SyntaxError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  // factor := NUMBER | "y" ("^" SNUMBER)? | "exp" "(" SNUMBER "*" "y" ")"
  void parse_factor(Term& t) {
    skip_ws();
    if (starts_number()) {
      t.coeff *= parse_number();
      return;
    }
    if (text_.compare(pos_, 3, "exp") == 0) {
      pos_ += 3;
      expect('(');
      t.rate += parse_signed_number();
      expect('*');
      skip_ws();
      if (peek() != 'y') throw SyntaxError("expected 'y' inside exp()", pos_);
      ++pos_;
      expect(')');
      return;
    }
    if (peek() == 'y') {
      ++pos_;
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        t.power += parse_signed_number();
      } else {
        t.power += 1.0;
      }
      return;
    }
    throw SyntaxError("expected a number, 'y' or 'exp('", pos_);
  }

  Term parse_term(double sign) {
    Term t{sign, 0.0, 0.0};
    parse_factor(t);
    skip_ws();
    while (peek() == '*') {
      ++pos_;
      parse_factor(t);
      skip_ws();
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_double(double v) {
  // Shortest representation that round-trips; integers print without ".0".
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

ExpLaurentExpr parse(std::string_view text) { return Parser(text).run(); }

std::string to_string(const ExpLaurentExpr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : e.terms()) {
    const double c = t.coeff;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += (c < 0) ? " - " : " + ";
    }
    first = false;
    const double a = std::abs(c);
    std::vector<std::string> factors;
    if (a != 1.0 || (t.power == 0.0 && t.rate == 0.0)) factors.push_back(format_double(a));
    if (t.power == 1.0)
      factors.push_back("y");
    else if (t.power != 0.0)
      factors.push_back("y^" + format_double(t.power));
    if (t.rate != 0.0) factors.push_back("exp(" + format_double(t.rate) + "*y)");
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out += "*";
      out += factors[i];
    }
  }
  return out;
}

double evaluate(const ExpLaurentExpr& e, double y) {
  if (y <= 0.0) {
    for (const Term& t : e.terms())
      if (t.power < 0.0 || !is_integer(t.power))
        throw DomainError("evaluation at y <= 0 with negative or fractional power y^" +
                          format_double(t.power));
  }
  double sum = 0.0;
  for (const Term& t : e.terms()) {
    double v = t.coeff;
    if (t.power != 0.0) v *= std::pow(y, t.power);
    if (t.rate != 0.0) v *= std::exp(t.rate * y);
    sum += v;
  }
  return sum;
}

ExpLaurentExpr differentiate(const ExpLaurentExpr& e) {
  std::vector<Term> out;
  out.reserve(2 * e.terms().size());
  for (const Term& t : e.terms()) {
    if (t.power != 0.0) out.push_back({t.coeff * t.power, t.power - 1.0, t.rate});
    if (t.rate != 0.0) out.push_back({t.coeff * t.rate, t.power, t.rate});
  }
  return ExpLaurentExpr::from_terms(std::move(out));
}

ExpLaurentExpr add(const ExpLaurentExpr& a, const ExpLaurentExpr& b) {
  std::vector<Term> out = a.terms();
  out.insert(out.end(), b.terms().begin(), b.terms().end());
  return ExpLaurentExpr::from_terms(std::move(out));
}

ExpLaurentExpr multiply(const ExpLaurentExpr& a, const ExpLaurentExpr& b) {
  std::vector<Term> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const Term& ta : a.terms())
    for (const Term& tb : b.terms())
      out.push_back({ta.coeff * tb.coeff, ta.power + tb.power, ta.rate + tb.rate});
  return ExpLaurentExpr::from_terms(std::move(out));
}

ExpLaurentExpr scale(const ExpLaurentExpr& a, double c) {
  std::vector<Term> out = a.terms();
  for (Term& t : out) t.coeff *= c;
  return ExpLaurentExpr::from_terms(std::move(out));
}

ExpLaurentExpr pow_int(const ExpLaurentExpr& e, int k) {
  if (k < 0) throw RangeError("pow_int: negative exponent");
  ExpLaurentExpr acc = ExpLaurentExpr::constant(1.0);
  for (int i = 0; i < k; ++i) acc = multiply(acc, e);
  return acc;
}

ExpLaurentExpr antiderivative(const ExpLaurentExpr& e) {
  std::vector<Term> out;
  for (const Term& t : e.terms()) {
    if (t.rate == 0.0) {
      if (t.power == -1.0)
        throw UnsupportedTerm("antiderivative of y^-1 is logarithmic");
      out.push_back({t.coeff / (t.power + 1.0), t.power + 1.0, 0.0});
      continue;
    }
    if (t.power < 0.0 || !is_integer(t.power))
      throw UnsupportedTerm("antiderivative of y^" + format_double(t.power) +
                            "*exp(y*rate) is not exp-Laurent");
    // Repeated integration by parts:
    //   int y^p e^{mu y} dy = e^{mu y} sum_j (-1)^j p!/(p-j)! y^{p-j} / mu^{j+1}
    const int p = static_cast<int>(t.power);
    double a = t.coeff / t.rate;
    for (int j = 0; j <= p; ++j) {
      out.push_back({a, static_cast<double>(p - j), t.rate});
      a = -a * static_cast<double>(p - j) / t.rate;
    }
  }
  return ExpLaurentExpr::from_terms(std::move(out));
}

Constancy constancy_check(const ExpLaurentExpr& e, double tol_abs) {
  Constancy res;
  res.constant = true;
  for (const Term& t : e.terms()) {
    if (t.power == 0.0 && t.rate == 0.0) {
      res.value = t.coeff;
    } else if (std::abs(t.coeff) > tol_abs) {
      res.constant = false;
    }
  }
  if (!res.constant) res.value = 0.0;
  return res;
}

std::optional<std::map<double, double>> laurent_fit(const ExpLaurentExpr& e,
                                                    std::span<const double> powers) {
  std::map<double, double> fit;
  for (double p : powers) {
    const double ps = snap(p);
    if (!fit.emplace(ps, 0.0).second) throw ParamError("laurent_fit: duplicate power requested");
  }
  for (const Term& t : e.terms()) {
    if (t.rate != 0.0) return std::nullopt;
    auto it = fit.find(t.power);
    if (it == fit.end()) return std::nullopt;
    it->second = t.coeff;
  }
  return fit;
}

}  // namespace radial
