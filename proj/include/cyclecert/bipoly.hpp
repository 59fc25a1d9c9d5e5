#ifndef CYCLECERT_BIPOLY_HPP
#define CYCLECERT_BIPOLY_HPP

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclecert/ratpoly.hpp"

namespace cyclecert {

enum class Var { x, y };

/// Sparse polynomial in (x, y): exponent pair (i, j) -> nonzero coefficient of x^i y^j.
class BiPoly {
 public:
  using Exponent = std::pair<int, int>;
  using Terms = std::map<Exponent, Rat>;

  BiPoly() = default;

  static BiPoly term(const Rat& c, int i, int j) {
    BiPoly p;
    p.add_term(c, i, j);
    return p;
  }
  static BiPoly constant(const Rat& c) { return term(c, 0, 0); }
  static BiPoly x() { return term(Rat(1), 1, 0); }
  static BiPoly y() { return term(Rat(1), 0, 1); }

  /// Embeds a univariate polynomial in the variable `v`.
  static BiPoly from_univariate(const RatPoly& p, Var v) {
    BiPoly out;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const int e = static_cast<int>(i);
      out.add_term(p.coeff(i), v == Var::x ? e : 0, v == Var::y ? e : 0);
    }
    return out;
  }

  void add_term(const Rat& c, int i, int j) {
    if (i < 0 || j < 0) throw std::invalid_argument("negative exponent");
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace({i, j}, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  [[nodiscard]] Rat coeff(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? Rat(0) : it->second;
  }

  /// Max i + j over stored terms; -1 for the zero polynomial.
  [[nodiscard]] int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
  }

  [[nodiscard]] int degree_in(Var v) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, v == Var::x ? e.first : e.second);
    return d;
  }

  [[nodiscard]] Rat eval(const Rat& x, const Rat& y) const {
    Rat acc = 0;
    for (const auto& [e, c] : terms_) {
      Rat t = c;
      for (int k = 0; k < e.first; ++k) t *= x;
      for (int k = 0; k < e.second; ++k) t *= y;
      acc += t;
    }
    return acc;
  }

  /// Nested Horner evaluation: outer in x, inner in y.
  [[nodiscard]] double eval_f64(double x, double y) const {
    if (terms_.empty()) return 0.0;
    double outer = 0.0;
    int cur_i = terms_.rbegin()->first.first;
    auto it = terms_.rbegin();
    while (it != terms_.rend()) {
      const int i = it->first.first;
      for (int k = i; k < cur_i; ++k) outer *= x;
      cur_i = i;
      double inner = 0.0;
      int cur_j = it->first.second;
      while (it != terms_.rend() && it->first.first == i) {
        const int j = it->first.second;
        for (int k = j; k < cur_j; ++k) inner *= y;
        cur_j = j;
        inner += it->second.get_d();
        ++it;
      }
      for (int k = 0; k < cur_j; ++k) inner *= y;
      outer += inner;
    }
    for (int k = 0; k < cur_i; ++k) outer *= x;
    return outer;
  }

  /// Coefficient of y^j as a polynomial in x.
  [[nodiscard]] RatPoly coeff_in_y(int j) const {
    std::vector<Rat> v;
    for (const auto& [e, c] : terms_) {
      if (e.second != j) continue;
      if (static_cast<int>(v.size()) <= e.first) v.resize(static_cast<std::size_t>(e.first) + 1);
      v[static_cast<std::size_t>(e.first)] = c;
    }
    return RatPoly(std::move(v));
  }

  /// p(x0, y) as a polynomial in y.
  [[nodiscard]] RatPoly at_x(const Rat& x0) const {
    std::vector<Rat> v(static_cast<std::size_t>(std::max(0, degree_in(Var::y) + 1)));
    for (const auto& [e, c] : terms_) {
      Rat t = c;
      for (int k = 0; k < e.first; ++k) t *= x0;
      v[static_cast<std::size_t>(e.second)] += t;
    }
    return RatPoly(std::move(v));
  }

  BiPoly& operator+=(const BiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(c, e.first, e.second);
    return *this;
  }
  BiPoly& operator-=(const BiPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(-c, e.first, e.second);
    return *this;
  }
  BiPoly& operator*=(const Rat& s) {
    if (sgn(s) == 0) {
      terms_.clear();
    } else {
      for (auto& [e, c] : terms_) c *= s;
    }
    return *this;
  }
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator-(BiPoly a) { return a *= Rat(-1); }
  friend BiPoly operator*(BiPoly a, const Rat& s) { return a *= s; }
  friend BiPoly operator*(const Rat& s, BiPoly a) { return a *= s; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly out;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) out.add_term(ca * cb, ea.first + eb.first, ea.second + eb.second);
    }
    return out;
  }
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

inline BiPoly partial(const BiPoly& p, Var v) {
  BiPoly out;
  for (const auto& [e, c] : p.terms()) {
    const int k = v == Var::x ? e.first : e.second;
    if (k == 0) continue;
    if (v == Var::x) {
      out.add_term(c * k, e.first - 1, e.second);
    } else {
      out.add_term(c * k, e.first, e.second - 1);
    }
  }
  return out;
}

/// q(x^2 + y^2) for a univariate q.
inline BiPoly radial_lift(const RatPoly& q) {
  const BiPoly rho = BiPoly::term(Rat(1), 2, 0) + BiPoly::term(Rat(1), 0, 2);
  BiPoly out;
  BiPoly power = BiPoly::constant(Rat(1));
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (sgn(q.coeff(i)) != 0) out += power * q.coeff(i);
    power = power * rho;
  }
  return out;
}

inline std::string to_string(const BiPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    if (first) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    const Rat mag = abs_rat(c);
    if (mag != 1 || e.first + e.second == 0) factors.push_back(mag.get_str());
    if (e.first > 0) factors.push_back(e.first == 1 ? "x" : "x^" + std::to_string(e.first));
    if (e.second > 0) factors.push_back(e.second == 1 ? "y" : "y^" + std::to_string(e.second));
    for (std::size_t k = 0; k < factors.size(); ++k) os << (k ? "*" : "") << factors[k];
  }
  return os.str();
}

struct BothConstantInY : std::invalid_argument {
  BothConstantInY() : std::invalid_argument("resultant_y: both polynomials are constant in y") {}
};

/// Determinant of a square matrix over Q[x] by Bareiss fraction-free elimination.
inline RatPoly bareiss_determinant(std::vector<std::vector<RatPoly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return RatPoly::constant(Rat(1));
  RatPoly prev = RatPoly::constant(Rat(1));
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return {};
      std::swap(m[k], m[swap_row]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
      }
      m[i][k] = RatPoly{};
    }
    prev = m[k][k];
  }
  RatPoly det = m[n - 1][n - 1];
  return negate ? -det : det;
}

/// Sylvester resultant of p and q with respect to y, as a polynomial in x.
inline RatPoly resultant_y(const BiPoly& p, const BiPoly& q) {
  if (p.is_zero() || q.is_zero()) throw std::invalid_argument("resultant_y: zero polynomial");
  const int m = p.degree_in(Var::y);
  const int n = q.degree_in(Var::y);
  if (m == 0 && n == 0) throw BothConstantInY();
  const auto size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<RatPoly>> syl(size, std::vector<RatPoly>(size));
  // rows hold coefficients from the highest power of y down
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j <= m; ++j) syl[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + m - j)] = p.coeff_in_y(j);
  }
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j <= n; ++j) {
      syl[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + n - j)] = q.coeff_in_y(j);
    }
  }
  return bareiss_determinant(std::move(syl));
}

struct OriginNotSingular : std::invalid_argument {
  OriginNotSingular() : std::invalid_argument("OriginNotSingular: P(0,0) and Q(0,0) must both vanish") {}
};

/// Planar system x' = P(x, y), y' = Q(x, y) with a singular point at the origin.
class SystemSpec {
 public:
  SystemSpec(BiPoly P, BiPoly Q) : P_(std::move(P)), Q_(std::move(Q)) {
    if (sgn(P_.coeff(0, 0)) != 0 || sgn(Q_.coeff(0, 0)) != 0) throw OriginNotSingular();
  }

  [[nodiscard]] const BiPoly& P() const { return P_; }
  [[nodiscard]] const BiPoly& Q() const { return Q_; }
  [[nodiscard]] int degree() const { return std::max(P_.total_degree(), Q_.total_degree()); }
  [[nodiscard]] BiPoly divergence() const { return partial(P_, Var::x) + partial(Q_, Var::y); }

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;

 private:
  BiPoly P_;
  BiPoly Q_;
};

}  // namespace cyclecert

#endif  // CYCLECERT_BIPOLY_HPP
