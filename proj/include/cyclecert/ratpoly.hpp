#ifndef CYCLECERT_RATPOLY_HPP
#define CYCLECERT_RATPOLY_HPP

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclecert/rational.hpp"

namespace cyclecert {

/// Raised by operations whose precondition excludes the zero polynomial.
struct ZeroPolynomial : std::domain_error {
  ZeroPolynomial() : std::domain_error("operation undefined for the zero polynomial") {}
};

/// Dense univariate polynomial over Q. Coefficient i multiplies x^i; trailing
/// zeros are trimmed so the leading coefficient is nonzero unless the
/// polynomial is identically zero, whose degree is -1.
class RatPoly {
 public:
  static constexpr int kZeroDegree = -1;

  RatPoly() = default;
  explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
  RatPoly(std::initializer_list<Rat> coeffs) : c_(coeffs) { trim(); }

  static RatPoly constant(const Rat& c) { return RatPoly(std::vector<Rat>{c}); }
  static RatPoly monomial(const Rat& c, std::size_t power) {
    std::vector<Rat> v(power + 1);
    v[power] = c;
    return RatPoly(std::move(v));
  }
  /// The identity polynomial x.
  static RatPoly x() { return monomial(Rat(1), 1); }

  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  [[nodiscard]] std::span<const Rat> coeffs() const { return c_; }
  [[nodiscard]] std::size_t size() const { return c_.size(); }

  /// Coefficient of x^i; zero beyond the degree.
  [[nodiscard]] Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }

  [[nodiscard]] const Rat& leading() const {
    if (c_.empty()) throw ZeroPolynomial();
    return c_.back();
  }

  /// Lowest power with a nonzero coefficient (the multiplicity of 0 as a root).
  [[nodiscard]] std::size_t lowest_power() const {
    if (c_.empty()) throw ZeroPolynomial();
    std::size_t i = 0;
    while (sgn(c_[i]) == 0) ++i;
    return i;
  }

  [[nodiscard]] Rat eval(const Rat& x) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  [[nodiscard]] int sign_at(const Rat& x) const { return sgn(eval(x)); }

  [[nodiscard]] double eval_f64(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->get_d();
    return acc;
  }

  RatPoly& operator+=(const RatPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  RatPoly& operator-=(const RatPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  RatPoly& operator*=(const Rat& s) {
    if (sgn(s) == 0) {
      c_.clear();
      return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
  friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
  friend RatPoly operator-(RatPoly a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend RatPoly operator*(RatPoly a, const Rat& s) { return a *= s; }
  friend RatPoly operator*(const Rat& s, RatPoly a) { return a *= s; }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rat> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (sgn(a.c_[i]) == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return RatPoly(std::move(out));
  }

  friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }

  std::vector<Rat> c_;
};

enum class PolyOp { add, sub, mul };

inline RatPoly poly_arith(const RatPoly& a, const RatPoly& b, PolyOp op) {
  switch (op) {
    case PolyOp::add: return a + b;
    case PolyOp::sub: return a - b;
    case PolyOp::mul: return a * b;
  }
  return {};
}

inline RatPoly derivative(const RatPoly& p) {
  if (p.degree() < 1) return {};
  std::vector<Rat> out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = p.coeff(i) * static_cast<long>(i);
  return RatPoly(std::move(out));
}

/// q(r) = p(r^2).
inline RatPoly substitute_square(const RatPoly& p) {
  if (p.is_zero()) return {};
  std::vector<Rat> out(2 * p.size() - 1);
  for (std::size_t i = 0; i < p.size(); ++i) out[2 * i] = p.coeff(i);
  return RatPoly(std::move(out));
}

/// p(x) * x^k.
inline RatPoly shift_up(const RatPoly& p, std::size_t k) {
  if (p.is_zero()) return {};
  std::vector<Rat> out(p.size() + k);
  for (std::size_t i = 0; i < p.size(); ++i) out[i + k] = p.coeff(i);
  return RatPoly(std::move(out));
}

/// p(x) / x^k; the low coefficients must vanish.
inline RatPoly shift_down(const RatPoly& p, std::size_t k) {
  if (p.is_zero()) return {};
  for (std::size_t i = 0; i < std::min(k, p.size()); ++i) {
    if (sgn(p.coeff(i)) != 0) throw std::domain_error("shift_down: polynomial not divisible by x^k");
  }
  if (k >= p.size()) return {};
  std::vector<Rat> out(p.coeffs().begin() + static_cast<std::ptrdiff_t>(k), p.coeffs().end());
  return RatPoly(std::move(out));
}

/// Euclidean division a = q*b + r with deg r < deg b.
inline std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) throw ZeroPolynomial();
  if (a.degree() < b.degree()) return {RatPoly{}, a};
  std::vector<Rat> rem(a.coeffs().begin(), a.coeffs().end());
  const auto db = static_cast<std::size_t>(b.degree());
  std::vector<Rat> quo(rem.size() - db);
  const Rat& lb = b.leading();
  for (std::size_t i = quo.size(); i-- > 0;) {
    const Rat f = rem[i + db] / lb;
    quo[i] = f;
    if (sgn(f) == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[i + j] -= f * b.coeff(j);
  }
  rem.resize(db);
  return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

/// Exact quotient; throws if b does not divide a.
inline RatPoly exact_div(const RatPoly& a, const RatPoly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw std::domain_error("exact_div: nonzero remainder");
  return q;
}

/// Scales to leading coefficient 1 (zero stays zero).
inline RatPoly monic(const RatPoly& p) {
  if (p.is_zero()) return p;
  return p * Rat(1 / p.leading());
}

/// Monic greatest common divisor; gcd(0, 0) = 0.
inline RatPoly gcd(RatPoly a, RatPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = monic(r);
  }
  return monic(a);
}

/// p / gcd(p, p'): same distinct roots, all simple.
inline RatPoly square_free(const RatPoly& p) {
  if (p.is_zero()) throw ZeroPolynomial();
  if (p.degree() == 0) return monic(p);
  return monic(exact_div(p, gcd(p, derivative(p))));
}

inline std::string to_string(const RatPoly& p, char var = 'x') {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Rat& c = p.coeff(i);
    if (sgn(c) == 0) continue;
    Rat mag = abs_rat(c);
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) os << mag.get_str();
    if (i >= 1) {
      if (mag != 1) os << '*';
      os << var;
      if (i > 1) os << '^' << i;
    }
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const RatPoly& p) { return os << to_string(p); }

}  // namespace cyclecert

#endif  // CYCLECERT_RATPOLY_HPP
