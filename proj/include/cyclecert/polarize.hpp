#ifndef CYCLECERT_POLARIZE_HPP
#define CYCLECERT_POLARIZE_HPP

#include <stdexcept>

#include "cyclecert/bipoly.hpp"
#include "cyclecert/trigpoly.hpp"

namespace cyclecert {

/// Raised when theta_mean(R)/r carries an odd power. Valid input never
/// triggers it, so it signals an arithmetic bug.
struct OddPowerResidue : std::logic_error {
  OddPowerResidue() : std::logic_error("radial_average: odd power in theta-mean of R / r") {}
};

/// r' = R(r, theta), theta' = Theta(r, theta).
struct PolarSystem {
  TrigRadialPoly R;
  TrigRadialPoly Theta;
  int n = 0;
};

inline PolarSystem to_polar(const SystemSpec& sys) {
  if (sgn(sys.P().coeff(0, 0)) != 0 || sgn(sys.Q().coeff(0, 0)) != 0) throw OriginNotSingular();
  const TrigRadialPoly p = from_cartesian(sys.P());
  const TrigRadialPoly q = from_cartesian(sys.Q());
  const auto cos1 = TrigRadialPoly::slice(0, FourierSlice::cos_harmonic(1, Rat(1)));
  const auto sin1 = TrigRadialPoly::slice(0, FourierSlice::sin_harmonic(1, Rat(1)));
  PolarSystem ps;
  ps.R = p * cos1 + q * sin1;
  ps.Theta = div_r(q * cos1 - p * sin1);
  ps.n = sys.degree();
  return ps;
}

/// p(s) with p(r^2) = theta_mean(R)(r) / r.
inline RatPoly radial_average(const PolarSystem& ps) {
  const RatPoly mean = theta_mean(ps.R);
  if (mean.is_zero()) return {};
  const RatPoly over_r = shift_down(mean, 1);
  std::vector<Rat> s_coeffs((over_r.size() + 1) / 2);
  for (std::size_t i = 0; i < over_r.size(); ++i) {
    if (i % 2 == 1) {
      if (sgn(over_r.coeff(i)) != 0) throw OddPowerResidue();
      continue;
    }
    s_coeffs[i / 2] = over_r.coeff(i);
  }
  return RatPoly(std::move(s_coeffs));
}

/// x' = x u(x^2+y^2) - y v(x^2+y^2), y' = x v(x^2+y^2) + y u(x^2+y^2);
/// in polar form r' = r u(r^2), theta' = v(r^2).
inline SystemSpec rotational_system(const RatPoly& u, const RatPoly& v) {
  const BiPoly U = radial_lift(u);
  const BiPoly V = radial_lift(v);
  const BiPoly x = BiPoly::x();
  const BiPoly y = BiPoly::y();
  return SystemSpec(x * U - y * V, x * V + y * U);
}

}  // namespace cyclecert

#endif  // CYCLECERT_POLARIZE_HPP
