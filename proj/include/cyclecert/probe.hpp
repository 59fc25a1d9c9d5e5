#ifndef CYCLECERT_PROBE_HPP
#define CYCLECERT_PROBE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclecert/bipoly.hpp"
#include "cyclecert/certify.hpp"
#include "cyclecert/ode.hpp"
#include "cyclecert/polarize.hpp"
#include "cyclecert/sturm.hpp"

namespace cyclecert::probe {

/// Dense double coefficient table c[i][j] of x^i y^j, evaluated by nested Horner.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const BiPoly& p)
      : nx_(std::max(0, p.degree_in(Var::x)) + 1), ny_(std::max(0, p.degree_in(Var::y)) + 1), c_(nx_ * ny_, 0.0) {
    for (const auto& [e, v] : p.terms()) c_[static_cast<std::size_t>(e.first) * ny_ + e.second] = v.get_d();
  }

  [[nodiscard]] double operator()(double x, double y) const {
    double outer = 0.0;
    for (std::size_t i = nx_; i-- > 0;) {
      double inner = 0.0;
      const double* row = &c_[i * ny_];
      for (std::size_t j = ny_; j-- > 0;) inner = inner * y + row[j];
      outer = outer * x + inner;
    }
    return outer;
  }

 private:
  std::size_t nx_ = 1;
  std::size_t ny_ = 1;
  std::vector<double> c_ = {0.0};
};

/// Floating-point view of a system: field, divergence and Jacobian.
/// A reversed field is the same system in backward time.
class VectorField {
 public:
  explicit VectorField(const SystemSpec& sys, bool reversed = false)
      : s_(reversed ? -1.0 : 1.0),
        P_(sys.P()),
        Q_(sys.Q()),
        Px_(partial(sys.P(), Var::x)),
        Py_(partial(sys.P(), Var::y)),
        Qx_(partial(sys.Q(), Var::x)),
        Qy_(partial(sys.Q(), Var::y)) {}

  [[nodiscard]] double P(double x, double y) const { return s_ * P_(x, y); }
  [[nodiscard]] double Q(double x, double y) const { return s_ * Q_(x, y); }
  [[nodiscard]] double divergence(double x, double y) const { return s_ * (Px_(x, y) + Qy_(x, y)); }
  [[nodiscard]] std::array<double, 4> jacobian(double x, double y) const {
    return {s_ * Px_(x, y), s_ * Py_(x, y), s_ * Qx_(x, y), s_ * Qy_(x, y)};
  }
  [[nodiscard]] bool reversed() const { return s_ < 0.0; }

 private:
  double s_ = 1.0;
  CompiledPoly P_, Q_, Px_, Py_, Qx_, Qy_;
};

struct ProbeError : std::runtime_error {
  enum class Kind { step_failure, escape, no_return, section_tangency, non_transversal_section };
  ProbeError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
  Kind kind;
};

/// Accepted steps of a trajectory with their dense output.
struct Trajectory {
  std::vector<ode::DenseSegment<2>> segments;

  [[nodiscard]] double t_begin() const { return segments.empty() ? 0.0 : segments.front().t0; }
  [[nodiscard]] double t_end() const { return segments.empty() ? 0.0 : segments.back().t1(); }

  [[nodiscard]] Point2 at(double t) const {
    if (segments.empty()) throw std::out_of_range("empty trajectory");
    auto it = std::lower_bound(segments.begin(), segments.end(), t,
                               [](const ode::DenseSegment<2>& s, double v) { return s.t1() < v; });
    if (it == segments.end()) it = std::prev(segments.end());
    const auto y = (*it)(t);
    return {y[0], y[1]};
  }
};

/// Adaptive integration from `start` over [0, t_end]; relative and absolute tolerance `tol`.
/// With `reversed` the field is followed in backward time.
inline Trajectory integrate(const SystemSpec& sys, Point2 start, double t_end, double tol, double r_guard = 1e6,
                            bool reversed = false) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be positive");
  const VectorField f(sys, reversed);
  Trajectory traj;
  auto rhs = [&](double, const ode::State<2>& y, ode::State<2>& dy) {
    dy[0] = f.P(y[0], y[1]);
    dy[1] = f.Q(y[0], y[1]);
  };
  ode::Tolerance t{tol, tol};
  try {
    ode::integrate_dopri5<2>(rhs, 0.0, {start.x, start.y}, t_end, t, [&](const ode::DenseSegment<2>& seg) {
      traj.segments.push_back(seg);
      if (std::hypot(seg.y1[0], seg.y1[1]) > r_guard) {
        throw ProbeError(ProbeError::Kind::escape, "Escape: trajectory left r < " + std::to_string(r_guard));
      }
      return ode::Control::proceed;
    });
  } catch (const ode::StepFailure& e) {
    throw ProbeError(ProbeError::Kind::step_failure, std::string("StepFailure: ") + e.what());
  }
  return traj;
}

struct ReturnOptions {
  double section_angle = 0.0;
  double tol = 1e-10;
  double t_max = 400.0;
  double r_guard = 1e3;
};

/// One first return to the ray {theta = section_angle, r > 0}.
struct ReturnResult {
  double r1 = 0.0;
  double period = 0.0;
  double divergence_integral = 0.0;
  double min_radius = 0.0;
  double max_radius = 0.0;
};

/// Integrates (x, y, unwrapped angle, integral of div) until the angle has
/// advanced by 2 pi in the direction of rotation at the start point.
inline ReturnResult poincare_return_detail(const VectorField& f, double r0, const ReturnOptions& opt) {
  if (!(r0 > 0.0)) throw std::invalid_argument("poincare_return: r0 must be positive");
  const double ca = std::cos(opt.section_angle);
  const double sa = std::sin(opt.section_angle);
  const ode::State<4> y0{r0 * ca, r0 * sa, opt.section_angle, 0.0};
  auto angular = [&](double x, double y) { return (x * f.Q(x, y) - y * f.P(x, y)) / (x * x + y * y); };
  const double w0 = angular(y0[0], y0[1]);
  if (!(std::abs(w0) > 1e-12)) {
    throw ProbeError(ProbeError::Kind::section_tangency, "SectionTangency: angular velocity vanishes at start");
  }
  const double dir = w0 > 0 ? 1.0 : -1.0;
  const double target = opt.section_angle + dir * 2.0 * std::numbers::pi;

  auto rhs = [&](double, const ode::State<4>& y, ode::State<4>& dy) {
    const double p = f.P(y[0], y[1]);
    const double q = f.Q(y[0], y[1]);
    dy[0] = p;
    dy[1] = q;
    dy[2] = (y[0] * q - y[1] * p) / (y[0] * y[0] + y[1] * y[1]);
    dy[3] = f.divergence(y[0], y[1]);
  };

  ReturnResult res;
  res.min_radius = res.max_radius = r0;
  bool found = false;
  ode::Tolerance tol{opt.tol, opt.tol};
  tol.max_steps = 200'000;
  try {
    ode::integrate_dopri5<4>(rhs, 0.0, y0, opt.t_max, tol, [&](const ode::DenseSegment<4>& seg) {
      const double rr = std::hypot(seg.y1[0], seg.y1[1]);
      if (!(rr < opt.r_guard)) throw ProbeError(ProbeError::Kind::escape, "Escape: radius exceeded guard");
      if (dir * (seg.y1[2] - opt.section_angle) < -std::numbers::pi) {
        throw ProbeError(ProbeError::Kind::no_return, "NoReturn: rotation reversed");
      }
      const double g1 = dir * (seg.y1[2] - target);
      if (g1 < 0.0) {
        res.min_radius = std::min(res.min_radius, rr);
        res.max_radius = std::max(res.max_radius, rr);
        return ode::Control::proceed;
      }
      double lo = seg.t0;
      double hi = seg.t1();
      if (hi < lo) std::swap(lo, hi);
      for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dir * (seg(mid)[2] - target) < 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const double te = 0.5 * (lo + hi);
      const auto ye = seg(te);
      res.r1 = std::hypot(ye[0], ye[1]);
      res.period = te;
      res.divergence_integral = ye[3];
      res.min_radius = std::min(res.min_radius, res.r1);
      res.max_radius = std::max(res.max_radius, res.r1);
      found = true;
      return ode::Control::stop;
    });
  } catch (const ode::StepFailure& e) {
    throw ProbeError(ProbeError::Kind::step_failure, std::string("StepFailure: ") + e.what());
  }
  if (!found) throw ProbeError(ProbeError::Kind::no_return, "NoReturn: no return before t_max");
  return res;
}

inline double poincare_return(const SystemSpec& sys, double r0, const ReturnOptions& opt = {}) {
  return poincare_return_detail(VectorField(sys), r0, opt).r1;
}

enum class CriticalStatus { origin_exact, refined_numeric };

inline const char* to_string(CriticalStatus s) {
  return s == CriticalStatus::origin_exact ? "origin-exact" : "refined-numeric";
}

struct CriticalPoint {
  double x = 0.0;
  double y = 0.0;
  double residual = 0.0;
  CriticalStatus status = CriticalStatus::refined_numeric;
};

struct DegenerateResultant : std::invalid_argument {
  DegenerateResultant() : std::invalid_argument("DegenerateResultant: Res_y(P, Q) vanishes identically") {}
};

/// Real critical points in [-box, box]^2: x from the exact roots of
/// Res_y(P, Q), y from the roots of P(x0, .) and Q(x0, .), then Newton on (P, Q).
inline std::vector<CriticalPoint> critical_points(const SystemSpec& sys, double box) {
  const RatPoly res = resultant_y(sys.P(), sys.Q());
  if (res.is_zero()) throw DegenerateResultant();
  const VectorField f(sys);
  std::vector<CriticalPoint> out{{0.0, 0.0, 0.0, CriticalStatus::origin_exact}};
  const Rat x_width(1, mpz_class(1) << 60);
  const Rat y_width(1, mpz_class(1) << 50);

  auto residual = [&](double x, double y) { return std::max(std::abs(f.P(x, y)), std::abs(f.Q(x, y))); };
  auto newton = [&](double& x, double y_init) {
    double y = y_init;
    for (int it = 0; it < 60; ++it) {
      const auto J = f.jacobian(x, y);
      const double det = J[0] * J[3] - J[1] * J[2];
      if (det == 0.0 || !std::isfinite(det)) break;
      const double p = f.P(x, y);
      const double q = f.Q(x, y);
      const double dx = (J[3] * p - J[1] * q) / det;
      const double dy = (-J[2] * p + J[0] * q) / det;
      x -= dx;
      y -= dy;
      if (std::abs(dx) + std::abs(dy) < 1e-16 * (1.0 + std::abs(x) + std::abs(y))) break;
    }
    return y;
  };

  for (const auto& xi : real_roots_isolated(res, x_width)) {
    const Rat x0 = xi.mid();
    const double x0d = x0.get_d();
    if (std::abs(x0d) > box * (1 + 1e-9) + 1e-9) continue;
    std::vector<double> y_candidates;
    for (const RatPoly& g : {sys.P().at_x(x0), sys.Q().at_x(x0)}) {
      if (g.degree() < 1) continue;
      for (const auto& yi : real_roots_isolated(g, y_width)) y_candidates.push_back(yi.approx());
    }
    for (double y0 : y_candidates) {
      double x = x0d;
      double y = newton(x, y0);
      double r = (std::isfinite(x) && std::isfinite(y)) ? residual(x, y) : std::numeric_limits<double>::infinity();
      // Newton crawls at degenerate zeros; keep the exact-x candidate when it is better
      if (const double r0 = residual(x0d, y0); !(r <= r0)) {
        x = x0d;
        y = y0;
        r = r0;
      }
      if (std::abs(x) > box || std::abs(y) > box) continue;
      if (!(r <= 1e-10)) continue;
      const bool dup = std::any_of(out.begin(), out.end(), [&](const CriticalPoint& c) {
        return std::hypot(c.x - x, c.y - y) < 1e-7;
      });
      if (!dup) out.push_back({x, y, r, CriticalStatus::refined_numeric});
    }
  }
  return out;
}

/// Section direction avoiding non-origin critical points on the ray: start at
/// angle 0, rotate by a golden-ratio fraction of a turn, at most 8 retries.
inline double choose_section_angle(const std::vector<CriticalPoint>& crit) {
  const double step = 2.0 * std::numbers::pi * (std::numbers::phi - 1.0);
  double angle = 0.0;
  for (int attempt = 0; attempt <= 8; ++attempt) {
    bool blocked = false;
    for (const auto& c : crit) {
      if (c.status == CriticalStatus::origin_exact) continue;
      double d = std::remainder(std::atan2(c.y, c.x) - angle, 2.0 * std::numbers::pi);
      if (std::abs(d) < 1e-2) blocked = true;
    }
    if (!blocked) return angle;
    angle = std::remainder(angle + step, 2.0 * std::numbers::pi);
  }
  throw ProbeError(ProbeError::Kind::non_transversal_section, "NonTransversalSection: no free section direction");
}

struct CycleFinding {
  double section_radius = 0.0;
  Stability stability = Stability::stable;
  double return_derivative = 0.0;
  double divergence_integral = 0.0;
  double period_estimate = 0.0;
  double min_radius = 0.0;
  double max_radius = 0.0;
  /// return_derivative < 1 agrees with divergence_integral < 0
  bool consistent = true;
};

struct DisplacementSample {
  double r = 0.0;
  double displacement = 0.0;  ///< +inf marks an escaping trajectory
  bool ok = false;
  std::string note;
};

struct FindOptions {
  double r_max = 0.0;  ///< 0: use default_search_radius
  double tol = 1e-10;
  int samples = 400;
  std::optional<double> section_angle;
  double root_tol = 1e-8;
};

struct CycleSearch {
  double section_angle = 0.0;
  double r_max = 0.0;
  int samples_requested = 0;
  std::vector<DisplacementSample> samples;           ///< forward-time map
  std::vector<DisplacementSample> backward_samples;  ///< backward-time map
  std::vector<CycleFinding> cycles;
  std::vector<std::string> log;
};

/// 2 (1 + largest non-negative root radius of w = r^2 p'(r^2) and of p(r^2)).
inline double default_search_radius(const SystemSpec& sys) {
  const RatPoly p = radial_average(to_polar(sys));
  double largest = 0.0;
  if (!p.is_zero()) {
    const Rat width(1, 1 << 20);
    const RatPoly w = derivative_weight(p);
    if (!w.is_zero()) {
      for (const auto& iv : positive_roots(w, width)) largest = std::max(largest, iv.hi.get_d());
    }
    for (const auto& iv : positive_roots(p, width)) largest = std::max(largest, std::sqrt(iv.hi.get_d()));
  }
  return 2.0 * (1.0 + largest);
}

/// Locates nested cycles around the origin as sign changes of the displacement
/// D(r) = return(r) - r on a log-spaced grid, refined to root_tol and classified
/// by the return-map derivative and the divergence integral.
namespace detail {

struct DirectedDerivative {
  double derivative = 0.0;
  ReturnResult at;
};

/// Central difference of the return map of f at r_star with step 1e-5 r_star.
/// Values below -noise are impossible for a ray return map (it is increasing)
/// and are treated as failures; smaller negative values are rounded up to 0.
inline std::optional<DirectedDerivative> return_derivative(const VectorField& f, double r_star,
                                                           const ReturnOptions& ropt) {
  const double h = 1e-5 * r_star;
  const double noise = 1e3 * ropt.tol / h;
  try {
    DirectedDerivative out;
    out.at = poincare_return_detail(f, r_star, ropt);
    const double up = poincare_return_detail(f, r_star + h, ropt).r1;
    const double down = poincare_return_detail(f, r_star - h, ropt).r1;
    out.derivative = (up - down) / (2.0 * h);
    if (out.derivative < -noise) return std::nullopt;
    out.derivative = std::max(out.derivative, 0.0);
    return out;
  } catch (const ProbeError&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Stability of the periodic orbit through r_star. The return map is
/// differenced in the time direction in which the cycle attracts; a repelling
/// cycle is read off the backward-time map and its derivative inverted.
/// Derivatives under the finite-difference noise floor are clamped to 1e-12.
inline std::optional<CycleFinding> classify_cycle(const VectorField& forward, const VectorField& backward,
                                                  double r_star, const ReturnOptions& ropt) {
  const auto fw = detail::return_derivative(forward, r_star, ropt);
  const auto bw = detail::return_derivative(backward, r_star, ropt);
  const bool fw_contracts = fw && fw->derivative < 1.0;
  const bool bw_contracts = bw && bw->derivative < 1.0;
  bool stable;
  if (fw_contracts && bw_contracts) {
    stable = fw->derivative <= bw->derivative;
  } else if (fw_contracts || bw_contracts) {
    stable = fw_contracts;
  } else if (fw) {
    stable = false;
  } else {
    return std::nullopt;
  }
  CycleFinding c;
  c.section_radius = r_star;
  if (stable || !bw) {
    c.return_derivative = fw->derivative;
    c.divergence_integral = fw->at.divergence_integral;
    c.period_estimate = fw->at.period;
    c.min_radius = fw->at.min_radius;
    c.max_radius = fw->at.max_radius;
  } else {
    c.return_derivative = 1.0 / std::max(bw->derivative, 1e-12);
    c.divergence_integral = -bw->at.divergence_integral;
    c.period_estimate = bw->at.period;
    c.min_radius = bw->at.min_radius;
    c.max_radius = bw->at.max_radius;
  }
  c.stability = c.return_derivative < 1.0 ? Stability::stable : Stability::unstable;
  c.consistent = (c.return_derivative < 1.0) == (c.divergence_integral < 0.0);
  return c;
}

/// Scans D(r) = return(r) - r on log-spaced samples over [r_max 1e-3, r_max]
/// for both the forward and the backward-time return map, so that cycles
/// bounding a basin without returning orbits on one side are still bracketed.
inline CycleSearch find_cycles(const SystemSpec& sys, const FindOptions& opt = {}) {
  CycleSearch out;
  out.r_max = opt.r_max > 0.0 ? opt.r_max : default_search_radius(sys);
  if (opt.section_angle) {
    out.section_angle = *opt.section_angle;
  } else {
    try {
      out.section_angle = choose_section_angle(critical_points(sys, 4.0 * out.r_max));
    } catch (const DegenerateResultant&) {
      out.section_angle = 0.0;
      out.log.push_back("P and Q share a factor; critical points not located, section angle 0");
    }
  }
  out.samples_requested = std::max(2, opt.samples);
  const VectorField forward(sys);
  const VectorField backward(sys, true);
  ReturnOptions ropt;
  ropt.section_angle = out.section_angle;
  ropt.tol = opt.tol;
  ropt.r_guard = std::max(10.0, 4.0 * out.r_max);

  // +inf for escape, nullopt for any other failure
  auto displacement = [&](const VectorField& f, double r, std::string* note) -> std::optional<double> {
    try {
      return poincare_return_detail(f, r, ropt).r1 - r;
    } catch (const ProbeError& e) {
      if (note) *note = e.what();
      if (e.kind == ProbeError::Kind::escape) return std::numeric_limits<double>::infinity();
      return std::nullopt;
    }
  };
  auto sgn_of = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };

  const int n = out.samples_requested;
  const double r_lo = out.r_max * 1e-3;
  std::vector<double> roots;
  for (const VectorField* f : {&forward, &backward}) {
    const char* dir = f->reversed() ? "backward" : "forward";
    std::vector<DisplacementSample> samples;
    for (int i = 0; i < n; ++i) {
      DisplacementSample s;
      s.r = r_lo * std::pow(out.r_max / r_lo, static_cast<double>(i) / (n - 1));
      if (auto d = displacement(*f, s.r, &s.note)) {
        s.ok = true;
        s.displacement = *d;
      } else {
        out.log.push_back(std::string(dir) + " r = " + std::to_string(s.r) + ": " + s.note);
      }
      samples.push_back(std::move(s));
    }
    for (int i = 0; i + 1 < n; ++i) {
      const auto& sa = samples[static_cast<std::size_t>(i)];
      const auto& sb = samples[static_cast<std::size_t>(i + 1)];
      if (!sa.ok || !sb.ok) continue;
      if (std::isinf(sa.displacement) && std::isinf(sb.displacement)) continue;
      const int ga = sgn_of(sa.displacement);
      const int gb = sgn_of(sb.displacement);
      if (!(ga * gb < 0 || (gb == 0 && ga != 0))) continue;
      double a = sa.r, b = sb.r, fa = sa.displacement, fb = sb.displacement;
      std::optional<double> root;
      if (gb == 0) root = b;
      bool failed = false;
      while (!root && b - a > opt.root_tol) {
        const double c = 0.5 * (a + b);
        const auto fc = displacement(*f, c, nullptr);
        if (!fc) {
          failed = true;
          break;
        }
        if (*fc == 0.0) {
          root = c;
        } else if (sgn_of(*fc) == sgn_of(fa)) {
          a = c;
          fa = *fc;
        } else {
          b = c;
          fb = *fc;
        }
      }
      if (!root && !failed) {
        // secant through the final bracket
        root = (std::isinf(fa) || std::isinf(fb)) ? 0.5 * (a + b) : (a * fb - b * fa) / (fb - fa);
      }
      if (!root) {
        out.log.push_back(std::string(dir) + " bracket [" + std::to_string(sa.r) + ", " + std::to_string(sb.r) +
                          "] abandoned");
        continue;
      }
      const bool seen = std::any_of(roots.begin(), roots.end(), [&](double r) {
        return std::abs(r - *root) <= 1e-6 * std::max(1.0, r);
      });
      if (!seen) roots.push_back(*root);
    }
    if (!f->reversed()) out.samples = std::move(samples);
    else out.backward_samples = std::move(samples);
  }

  std::sort(roots.begin(), roots.end());
  for (double r_star : roots) {
    if (auto c = classify_cycle(forward, backward, r_star, ropt)) {
      out.cycles.push_back(*c);
    } else {
      out.log.push_back("classification failed at r = " + std::to_string(r_star));
    }
  }
  return out;
}

inline CycleSearch find_cycles(const SystemSpec& sys, double r_max) {
  FindOptions opt;
  opt.r_max = r_max;
  return find_cycles(sys, opt);
}

enum class Flow { inward, outward, mixed };

inline const char* to_string(Flow f) {
  switch (f) {
    case Flow::inward: return "inward";
    case Flow::outward: return "outward";
    case Flow::mixed: return "mixed";
  }
  return "";
}

struct Transversality {
  Flow flow = Flow::mixed;
  bool rigorous = false;
  double min_sample = 0.0;
  double max_sample = 0.0;
};

/// Sign of r' = R(r, theta) on the circle of exact radius r: rigorous when
/// a0 -/+ sum |harmonics| settles it, otherwise 4096 theta samples.
inline Transversality circle_transversality(const SystemSpec& sys, const Rat& r) {
  if (sgn(r) <= 0) throw std::invalid_argument("circle_transversality: r must be positive");
  const FourierSlice s = to_polar(sys).R.at_radius(r);
  const Rat l1 = s.harmonic_l1();
  Transversality out;
  if (s.a0() - l1 > 0) {
    out.flow = Flow::outward;
    out.rigorous = true;
  } else if (s.a0() + l1 < 0) {
    out.flow = Flow::inward;
    out.rigorous = true;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  constexpr int kSamples = 4096;
  for (int i = 0; i < kSamples; ++i) {
    const double v = s.eval_f64(2.0 * std::numbers::pi * i / kSamples);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.min_sample = lo;
  out.max_sample = hi;
  if (!out.rigorous) out.flow = hi < 0.0 ? Flow::inward : (lo > 0.0 ? Flow::outward : Flow::mixed);
  return out;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,y\n";
  os.precision(17);
  if (traj.segments.empty()) return;
  os << traj.segments.front().t0 << ',' << traj.segments.front().y0[0] << ',' << traj.segments.front().y0[1] << '\n';
  for (const auto& seg : traj.segments) os << seg.t1() << ',' << seg.y1[0] << ',' << seg.y1[1] << '\n';
}

inline void write_displacement_csv(std::ostream& os, const CycleSearch& search) {
  os << "r,displacement\n";
  os.precision(17);
  for (const auto& s : search.samples) {
    if (s.ok) os << s.r << ',' << s.displacement << '\n';
  }
}

inline void write_findings_csv(std::ostream& os, const CycleSearch& search) {
  os << "radius,stability,return_derivative,divergence_integral\n";
  os.precision(17);
  for (const auto& c : search.cycles) {
    os << c.section_radius << ',' << to_string(c.stability) << ',' << c.return_derivative << ','
       << c.divergence_integral << '\n';
  }
}

}  // namespace cyclecert::probe

#endif  // CYCLECERT_PROBE_HPP
