#ifndef CYCLECERT_ODE_HPP
#define CYCLECERT_ODE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclecert::ode {

struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <std::size_t N>
using State = std::array<double, N>;

/// One accepted step with the Dormand-Prince continuous extension
/// (fourth order, Hairer's contd5 form).
template <std::size_t N>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  State<N> y0{};
  State<N> y1{};
  std::array<State<N>, 5> rcont{};

  [[nodiscard]] double t1() const { return t0 + h; }

  [[nodiscard]] State<N> operator()(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State<N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      out[i] = rcont[0][i] + s * (rcont[1][i] + s1 * (rcont[2][i] + s * (rcont[3][i] + s1 * rcont[4][i])));
    }
    return out;
  }
};

enum class Control { proceed, stop };

struct Tolerance {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_min = 1e-14;
  std::size_t max_steps = 2'000'000;
};

/// Adaptive Dormand-Prince 5(4). `rhs(t, y, dy)` fills dy; `observer(seg)`
/// sees every accepted step and may stop the integration early. Returns the
/// time reached.
template <std::size_t N, class Rhs, class Observer>
double integrate_dopri5(Rhs&& rhs, double t0, State<N> y, double t_end, const Tolerance& tol, Observer&& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                   e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  const double dir = t_end >= t0 ? 1.0 : -1.0;
  State<N> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, tmp{}, y_new{};
  rhs(t0, y, k1);

  auto norm = [&](const State<N>& v, const State<N>& ref) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = tol.atol + tol.rtol * std::abs(ref[i]);
      s += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(s / static_cast<double>(N));
  };

  // initial step size (Hairer, Norsett, Wanner II.4)
  double h;
  {
    const double d0 = norm(y, y);
    const double dd1 = norm(k1, y);
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, std::abs(t_end - t0));
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dir * h0 * k1[i];
    rhs(t0 + dir * h0, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) k2[i] -= k1[i];
    const double dd2 = norm(k2, y) / h0;
    const double mx = std::max(dd1, dd2);
    const double h1 = mx <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / mx, 1.0 / 5.0);
    h = std::min(100 * h0, h1);
  }

  double t = t0;
  double fac_old = 1e-4;
  std::size_t steps = 0;
  while (dir * (t_end - t) > 0.0) {
    if (++steps > tol.max_steps) throw StepFailure("dopri5: step budget exhausted at t = " + std::to_string(t));
    if (h < tol.h_min) throw StepFailure("dopri5: step size underflow at t = " + std::to_string(t));
    if (dir * (t + dir * h - t_end) > 0.0) h = std::abs(t_end - t);
    const double hs = dir * h;

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    rhs(t + c2 * hs, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * hs, tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * hs, tmp, k4);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * hs, tmp, k5);
    for (std::size_t i = 0; i < N; ++i) {
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    rhs(t + hs, tmp, k6);
    for (std::size_t i = 0; i < N; ++i) {
      y_new[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    rhs(t + hs, y_new, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / static_cast<double>(N));
    if (!std::isfinite(err)) {
      h *= 0.2;
      continue;
    }

    // Lund stabilisation as in DOPRI5
    const double fac11 = std::pow(err, 0.2 - 0.04 * 0.75);
    double fac = fac11 / std::pow(fac_old, 0.04);
    fac = std::clamp(fac / 0.9, 1.0 / 10.0, 1.0 / 0.2);
    const double h_new = h / fac;

    if (err <= 1.0) {
      fac_old = std::max(err, 1e-4);
      DenseSegment<N> seg;
      seg.t0 = t;
      seg.h = hs;
      seg.y0 = y;
      seg.y1 = y_new;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = y_new[i] - y[i];
        const double bspl = hs * k1[i] - ydiff;
        seg.rcont[0][i] = y[i];
        seg.rcont[1][i] = ydiff;
        seg.rcont[2][i] = bspl;
        seg.rcont[3][i] = ydiff - hs * k7[i] - bspl;
        seg.rcont[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      t += hs;
      y = y_new;
      k1 = k7;
      if (observer(seg) == Control::stop) return t;
      h = h_new;
    } else {
      h /= std::min(1.0 / 0.2, fac11 / 0.9);
    }
  }
  return t;
}

}  // namespace cyclecert::ode

#endif  // CYCLECERT_ODE_HPP
