#ifndef CYCLECERT_TRIGPOLY_HPP
#define CYCLECERT_TRIGPOLY_HPP

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cyclecert/bipoly.hpp"
#include "cyclecert/ratpoly.hpp"

namespace cyclecert {

/// a0 + sum_j (cos_j cos(j theta) + sin_j sin(j theta)), j >= 1, zero harmonics not stored.
class FourierSlice {
 public:
  using Harmonics = std::map<int, Rat>;

  FourierSlice() = default;
  explicit FourierSlice(Rat a0) : a0_(std::move(a0)) {}

  static FourierSlice cos_harmonic(int j, const Rat& c) {
    FourierSlice s;
    s.add_cos(j, c);
    return s;
  }
  static FourierSlice sin_harmonic(int j, const Rat& c) {
    FourierSlice s;
    s.add_sin(j, c);
    return s;
  }

  [[nodiscard]] const Rat& a0() const { return a0_; }
  [[nodiscard]] const Harmonics& cos_coeffs() const { return cos_; }
  [[nodiscard]] const Harmonics& sin_coeffs() const { return sin_; }
  [[nodiscard]] bool is_zero() const { return sgn(a0_) == 0 && cos_.empty() && sin_.empty(); }

  [[nodiscard]] int max_harmonic() const {
    int m = 0;
    if (!cos_.empty()) m = std::max(m, cos_.rbegin()->first);
    if (!sin_.empty()) m = std::max(m, sin_.rbegin()->first);
    return m;
  }

  /// Adds c*cos(j theta) for any integer j (cos is even, j = 0 feeds a0).
  void add_cos(int j, const Rat& c) {
    if (j < 0) j = -j;
    if (j == 0) {
      a0_ += c;
      return;
    }
    accumulate(cos_, j, c);
  }

  /// Adds c*sin(j theta) for any integer j (sin is odd, j = 0 vanishes).
  void add_sin(int j, const Rat& c) {
    if (j == 0) return;
    if (j < 0) {
      accumulate(sin_, -j, -c);
    } else {
      accumulate(sin_, j, c);
    }
  }

  FourierSlice& operator+=(const FourierSlice& o) {
    a0_ += o.a0_;
    for (const auto& [j, c] : o.cos_) add_cos(j, c);
    for (const auto& [j, c] : o.sin_) add_sin(j, c);
    return *this;
  }
  FourierSlice& operator*=(const Rat& s) {
    if (sgn(s) == 0) return *this = FourierSlice{};
    a0_ *= s;
    for (auto& [j, c] : cos_) c *= s;
    for (auto& [j, c] : sin_) c *= s;
    return *this;
  }
  friend FourierSlice operator+(FourierSlice a, const FourierSlice& b) { return a += b; }
  friend FourierSlice operator*(FourierSlice a, const Rat& s) { return a *= s; }
  friend FourierSlice operator*(const Rat& s, FourierSlice a) { return a *= s; }

  /// Product via the product-to-sum identities.
  friend FourierSlice operator*(const FourierSlice& a, const FourierSlice& b) {
    FourierSlice out;
    auto cos_terms = [](const FourierSlice& s) {
      std::vector<std::pair<int, Rat>> v{{0, s.a0_}};
      for (const auto& t : s.cos_) v.push_back(t);
      return v;
    };
    const auto ca = cos_terms(a);
    const auto cb = cos_terms(b);
    const Rat half(1, 2);
    for (const auto& [i, x] : ca) {
      if (sgn(x) == 0) continue;
      for (const auto& [j, y] : cb) {
        if (sgn(y) == 0) continue;
        // cos i cos j = (cos(i-j) + cos(i+j)) / 2
        const Rat h = half * x * y;
        out.add_cos(i - j, h);
        out.add_cos(i + j, h);
      }
      for (const auto& [j, y] : b.sin_) {
        // cos i sin j = (sin(i+j) - sin(i-j)) / 2
        const Rat h = half * x * y;
        out.add_sin(i + j, h);
        out.add_sin(i - j, -h);
      }
    }
    for (const auto& [i, x] : a.sin_) {
      for (const auto& [j, y] : cb) {
        if (sgn(y) == 0) continue;
        // sin i cos j = (sin(i+j) + sin(i-j)) / 2
        const Rat h = half * x * y;
        out.add_sin(i + j, h);
        out.add_sin(i - j, h);
      }
      for (const auto& [j, y] : b.sin_) {
        // sin i sin j = (cos(i-j) - cos(i+j)) / 2
        const Rat h = half * x * y;
        out.add_cos(i - j, h);
        out.add_cos(i + j, -h);
      }
    }
    return out;
  }

  friend bool operator==(const FourierSlice& a, const FourierSlice& b) {
    return a.a0_ == b.a0_ && a.cos_ == b.cos_ && a.sin_ == b.sin_;
  }

  [[nodiscard]] double eval_f64(double theta) const {
    double v = a0_.get_d();
    for (const auto& [j, c] : cos_) v += c.get_d() * std::cos(j * theta);
    for (const auto& [j, c] : sin_) v += c.get_d() * std::sin(j * theta);
    return v;
  }

  /// Sum of |harmonic coefficients|; max over theta of a slice is at most a0 + this.
  [[nodiscard]] Rat harmonic_l1() const {
    Rat s = 0;
    for (const auto& [j, c] : cos_) s += abs_rat(c);
    for (const auto& [j, c] : sin_) s += abs_rat(c);
    return s;
  }

  [[nodiscard]] FourierSlice d_dtheta() const {
    FourierSlice out;
    for (const auto& [j, c] : cos_) out.add_sin(j, Rat(-c * j));
    for (const auto& [j, c] : sin_) out.add_cos(j, Rat(c * j));
    return out;
  }

 private:
  static void accumulate(Harmonics& h, int j, const Rat& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = h.try_emplace(j, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) h.erase(it);
    }
  }

  Rat a0_;
  Harmonics cos_;
  Harmonics sin_;
};

struct NotDivisibleByR : std::domain_error {
  NotDivisibleByR() : std::domain_error("div_r: expansion has an r^0 slice") {}
};

/// Finite Fourier-radial expansion sum_i r^i S_i(theta).
class TrigRadialPoly {
 public:
  using Slices = std::map<int, FourierSlice>;

  TrigRadialPoly() = default;

  static TrigRadialPoly slice(int power, FourierSlice s) {
    TrigRadialPoly t;
    t.add_slice(power, std::move(s));
    return t;
  }
  static TrigRadialPoly constant(const Rat& c) { return slice(0, FourierSlice(c)); }

  /// A theta-free expansion equal to the univariate polynomial q(r).
  static TrigRadialPoly from_radial(const RatPoly& q) {
    TrigRadialPoly t;
    for (std::size_t i = 0; i < q.size(); ++i) t.add_slice(static_cast<int>(i), FourierSlice(q.coeff(i)));
    return t;
  }

  void add_slice(int power, const FourierSlice& s) {
    if (power < 0) throw std::invalid_argument("negative radial power");
    if (s.is_zero()) return;
    auto [it, inserted] = slices_.try_emplace(power, s);
    if (!inserted) {
      it->second += s;
      if (it->second.is_zero()) slices_.erase(it);
    }
  }

  [[nodiscard]] const Slices& slices() const { return slices_; }
  [[nodiscard]] bool is_zero() const { return slices_.empty(); }
  [[nodiscard]] int max_power() const { return slices_.empty() ? -1 : slices_.rbegin()->first; }
  [[nodiscard]] int min_power() const { return slices_.empty() ? -1 : slices_.begin()->first; }

  [[nodiscard]] FourierSlice slice_at(int power) const {
    auto it = slices_.find(power);
    return it == slices_.end() ? FourierSlice{} : it->second;
  }

  TrigRadialPoly& operator+=(const TrigRadialPoly& o) {
    for (const auto& [i, s] : o.slices_) add_slice(i, s);
    return *this;
  }
  TrigRadialPoly& operator*=(const Rat& c) {
    if (sgn(c) == 0) return *this = TrigRadialPoly{};
    for (auto& [i, s] : slices_) s *= c;
    return *this;
  }
  friend TrigRadialPoly operator+(TrigRadialPoly a, const TrigRadialPoly& b) { return a += b; }
  friend TrigRadialPoly operator-(TrigRadialPoly a, const TrigRadialPoly& b) {
    TrigRadialPoly nb = b;
    nb *= Rat(-1);
    return a += nb;
  }
  friend TrigRadialPoly operator*(TrigRadialPoly a, const Rat& c) { return a *= c; }
  friend TrigRadialPoly operator*(const Rat& c, TrigRadialPoly a) { return a *= c; }
  friend bool operator==(const TrigRadialPoly& a, const TrigRadialPoly& b) { return a.slices_ == b.slices_; }

  [[nodiscard]] double eval_f64(double r, double theta) const {
    double v = 0.0;
    for (auto it = slices_.rbegin(); it != slices_.rend(); ++it) {
      v += it->second.eval_f64(theta) * std::pow(r, it->first);
    }
    return v;
  }

  /// The pure trig polynomial sum_i r^i S_i at an exact radius.
  [[nodiscard]] FourierSlice at_radius(const Rat& r) const {
    FourierSlice out;
    for (const auto& [i, s] : slices_) {
      Rat ri = 1;
      for (int k = 0; k < i; ++k) ri *= r;
      out += s * ri;
    }
    return out;
  }

  /// Multiplies by r^k.
  [[nodiscard]] TrigRadialPoly shifted(int k) const {
    TrigRadialPoly out;
    for (const auto& [i, s] : slices_) out.add_slice(i + k, s);
    return out;
  }

 private:
  Slices slices_;
};

inline TrigRadialPoly trig_mul(const TrigRadialPoly& a, const TrigRadialPoly& b) {
  TrigRadialPoly out;
  for (const auto& [i, sa] : a.slices()) {
    for (const auto& [j, sb] : b.slices()) out.add_slice(i + j, sa * sb);
  }
  return out;
}

inline TrigRadialPoly operator*(const TrigRadialPoly& a, const TrigRadialPoly& b) { return trig_mul(a, b); }

inline TrigRadialPoly d_dr(const TrigRadialPoly& t) {
  TrigRadialPoly out;
  for (const auto& [i, s] : t.slices()) {
    if (i == 0) continue;
    out.add_slice(i - 1, s * Rat(i));
  }
  return out;
}

inline TrigRadialPoly d_dtheta(const TrigRadialPoly& t) {
  TrigRadialPoly out;
  for (const auto& [i, s] : t.slices()) out.add_slice(i, s.d_dtheta());
  return out;
}

inline TrigRadialPoly div_r(const TrigRadialPoly& t) {
  if (t.slices().contains(0)) throw NotDivisibleByR();
  return t.shifted(-1);
}

/// (1/2pi) * integral over theta: the a0 of every slice, as a polynomial in r.
inline RatPoly theta_mean(const TrigRadialPoly& t) {
  std::vector<Rat> v(static_cast<std::size_t>(t.max_power() + 1));
  for (const auto& [i, s] : t.slices()) v[static_cast<std::size_t>(i)] = s.a0();
  return RatPoly(std::move(v));
}

/// sum_i (a0_i + sum_j |a_ij| + |b_ij|) r^i: dominates t(r, theta) for all r >= 0.
inline RatPoly l1_majorant(const TrigRadialPoly& t) {
  std::vector<Rat> v(static_cast<std::size_t>(t.max_power() + 1));
  for (const auto& [i, s] : t.slices()) v[static_cast<std::size_t>(i)] = s.a0() + s.harmonic_l1();
  return RatPoly(std::move(v));
}

/// Exact expansion of p(r cos theta, r sin theta).
inline TrigRadialPoly from_cartesian(const BiPoly& p) {
  const FourierSlice c = FourierSlice::cos_harmonic(1, Rat(1));
  const FourierSlice s = FourierSlice::sin_harmonic(1, Rat(1));
  std::vector<FourierSlice> cos_pow{FourierSlice(Rat(1))};
  std::vector<FourierSlice> sin_pow{FourierSlice(Rat(1))};
  auto power = [](std::vector<FourierSlice>& table, const FourierSlice& base, int k) -> const FourierSlice& {
    while (static_cast<int>(table.size()) <= k) table.push_back(table.back() * base);
    return table[static_cast<std::size_t>(k)];
  };
  TrigRadialPoly out;
  for (const auto& [e, coef] : p.terms()) {
    const FourierSlice& ci = power(cos_pow, c, e.first);
    const FourierSlice& sj = power(sin_pow, s, e.second);
    out.add_slice(e.first + e.second, (ci * sj) * coef);
  }
  return out;
}

/// True when every slice i carries only harmonics j with j = i (mod 2).
inline bool has_radial_parity(const TrigRadialPoly& t) {
  for (const auto& [i, s] : t.slices()) {
    if (i % 2 == 1 && sgn(s.a0()) != 0) return false;
    for (const auto& [j, c] : s.cos_coeffs()) {
      if ((i - j) % 2 != 0) return false;
    }
    for (const auto& [j, c] : s.sin_coeffs()) {
      if ((i - j) % 2 != 0) return false;
    }
  }
  return true;
}

}  // namespace cyclecert

#endif  // CYCLECERT_TRIGPOLY_HPP
