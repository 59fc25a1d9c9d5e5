#ifndef CYCLECERT_CERTIFY_HPP
#define CYCLECERT_CERTIFY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclecert/polarize.hpp"
#include "cyclecert/sturm.hpp"

namespace cyclecert {

struct InvalidPair : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// (k, w): k > 0 and w(r) nonzero. The Dulac function it encodes is |w(r)|^(-1/k).
class DulacPair {
 public:
  DulacPair(Rat k, RatPoly w) : k_(std::move(k)), w_(std::move(w)) {
    if (sgn(k_) <= 0) throw InvalidPair("Dulac pair needs k > 0");
    if (w_.is_zero()) throw InvalidPair("Dulac pair needs w != 0");
  }

  [[nodiscard]] const Rat& k() const { return k_; }
  [[nodiscard]] const RatPoly& w() const { return w_; }
  [[nodiscard]] int d() const { return w_.degree(); }

  friend bool operator==(const DulacPair&, const DulacPair&) = default;

 private:
  Rat k_;
  RatPoly w_;
};

/// r p(r^2) w'(r) - 2k (p(r^2) + r^2 p'(r^2)) w(r)
inline RatPoly dulac_defect(const RatPoly& p, const Rat& k, const RatPoly& w) {
  const RatPoly p_sq = substitute_square(p);
  const RatPoly dp_sq = substitute_square(derivative(p));
  const RatPoly r = RatPoly::x();
  return r * p_sq * derivative(w) - (p_sq + shift_up(dp_sq, 2)) * w * Rat(2 * k);
}

inline NegativityWitness is_dulac_pair(const RatPoly& p, const DulacPair& pair) {
  return is_negative_on_positive_axis(dulac_defect(p, pair.k(), pair.w()));
}

/// w(r) = r^2 p'(r^2).
inline RatPoly derivative_weight(const RatPoly& p) { return shift_up(substitute_square(derivative(p)), 2); }

/// Rationals j/q in (0, 2] with q <= max_den, ordered by |k - 1| then k.
inline std::vector<Rat> k_grid(int max_den) {
  std::set<Rat> uniq;
  for (int q = 1; q <= max_den; ++q) {
    for (int j = 1; j <= 2 * q; ++j) uniq.insert(ratio(j, q));
  }
  std::vector<Rat> ks(uniq.begin(), uniq.end());
  std::stable_sort(ks.begin(), ks.end(), [](const Rat& a, const Rat& b) {
    const Rat da = abs_rat(a - 1);
    const Rat db = abs_rat(b - 1);
    if (da != db) return da < db;
    return a < b;
  });
  return ks;
}

/// Positive real roots of p, isolated and refined below `width`.
inline std::vector<RatInterval> positive_roots(const RatPoly& p, const Rat& width) {
  return positive_roots_isolated(SturmChain(p), width);
}

struct PairProposal {
  std::vector<DulacPair> candidates;
  bool impossible = false;
  std::string reason;
};

/// True when p has a repeated root on (0, inf); then no Dulac pair exists.
inline bool has_multiple_positive_root(const RatPoly& p) {
  const RatPoly g = gcd(p, derivative(p));
  return g.degree() >= 1 && count_roots(g, RootRange::positive()) > 0;
}

/// Unverified candidates in priority order: w = r^2 p'(r^2) over the k grid,
/// then w = prod (r^2 - alpha_m) with alpha_m the midpoints between consecutive
/// elements of {0} and the positive roots of p, for k in {1/2, 1, 2}.
inline PairProposal propose_pairs(const RatPoly& p, int max_denominator = 12) {
  if (p.is_zero()) throw ZeroPolynomial();
  PairProposal out;
  if (has_multiple_positive_root(p)) {
    out.impossible = true;
    out.reason = "NoDulacPairPossible: p has a multiple positive root";
    return out;
  }
  const RatPoly w_deriv = derivative_weight(p);
  if (!w_deriv.is_zero()) {
    for (const auto& k : k_grid(max_denominator)) out.candidates.emplace_back(k, w_deriv);
  }
  const auto roots = positive_roots(p, Rat(1, 1 << 20));
  if (!roots.empty()) {
    RatPoly w = RatPoly::constant(Rat(1));
    Rat prev = 0;
    for (const auto& iv : roots) {
      const Rat alpha = (prev + iv.mid()) / 2;
      w = w * RatPoly{Rat(-alpha), Rat(0), Rat(1)};
      prev = iv.mid();
    }
    for (const Rat& k : {Rat(1, 2), Rat(1), Rat(2)}) out.candidates.emplace_back(k, w);
  }
  return out;
}

/// R w'(r) - k (dR/dr + dTheta/dtheta + R/r) w(r)
inline TrigRadialPoly build_M(const PolarSystem& ps, const DulacPair& pair) {
  const TrigRadialPoly w = TrigRadialPoly::from_radial(pair.w());
  const TrigRadialPoly dw = TrigRadialPoly::from_radial(derivative(pair.w()));
  const TrigRadialPoly div_term = d_dr(ps.R) + d_dtheta(ps.Theta) + div_r(ps.R);
  TrigRadialPoly M = ps.R * dw - (div_term * w) * pair.k();
  if (M.max_power() > ps.n + pair.d() - 1) throw std::logic_error("build_M: radial power exceeds n + d - 1");
  return M;
}

enum class Stability { stable, unstable };
enum class CyclePrediction { none, at_most_one, exactly_one_if_no_critical_points };
enum class Presence { yes, no, unknown };

inline const char* to_string(Stability s) { return s == Stability::stable ? "stable" : "unstable"; }
inline const char* to_string(CyclePrediction c) {
  switch (c) {
    case CyclePrediction::none: return "none";
    case CyclePrediction::at_most_one: return "at-most-one";
    case CyclePrediction::exactly_one_if_no_critical_points: return "exactly-one-if-no-critical-points";
  }
  return "";
}
inline const char* to_string(Presence p) {
  switch (p) {
    case Presence::yes: return "yes";
    case Presence::no: return "no";
    case Presence::unknown: return "unknown";
  }
  return "";
}

/// A connected component of the plane minus {w(r) = 0}: inner < sqrt(x^2+y^2) < outer.
struct RingReport {
  RatInterval inner;                 ///< [0, 0] when the component reaches the origin
  std::optional<RatInterval> outer;  ///< nullopt: unbounded
  int w_sign = 0;
  bool simply_connected = false;     ///< the disc around the origin when w(0) != 0
  Presence contains_critical_points = Presence::unknown;
  CyclePrediction cycle_prediction = CyclePrediction::at_most_one;
  Stability stability_if_exists = Stability::stable;

  [[nodiscard]] bool bounded() const { return outer.has_value(); }
  /// Strict membership of a radius, decided against the enclosures.
  [[nodiscard]] bool contains_radius(double r) const {
    if (!(r > inner.hi.get_d())) return false;
    return !outer || r < outer->lo.get_d();
  }
};

/// Components of R^2 \ {w = 0}, innermost first.
inline std::vector<RingReport> ring_decomposition(const RatPoly& w, int m_plus) {
  if (w.is_zero()) throw ZeroPolynomial();
  const SturmChain chain(w);
  const Rat width(1, mpz_class(1) << 50);
  std::vector<RatInterval> roots;
  const bool zero_root = sgn(w.coeff(0)) == 0;
  if (zero_root) roots.push_back({Rat(0), Rat(0)});
  for (const auto& iv : positive_roots(w, width)) roots.push_back(iv);
  if (static_cast<int>(roots.size()) != m_plus) throw std::logic_error("ring_decomposition: m_plus mismatch");

  auto make = [&](RatInterval inner, std::optional<RatInterval> outer, const Rat& sample) {
    RingReport ring;
    ring.inner = std::move(inner);
    ring.outer = std::move(outer);
    ring.w_sign = w.sign_at(sample);
    ring.stability_if_exists = ring.w_sign < 0 ? Stability::stable : Stability::unstable;
    return ring;
  };

  std::vector<RingReport> rings;
  if (!zero_root) {
    std::optional<RatInterval> outer;
    if (!roots.empty()) outer = roots.front();
    RingReport disc = make({Rat(0), Rat(0)}, outer, Rat(0));
    disc.simply_connected = true;
    disc.cycle_prediction = CyclePrediction::none;
    rings.push_back(std::move(disc));
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    RatInterval inner = roots[i];
    std::optional<RatInterval> outer;
    Rat sample;
    if (i + 1 < roots.size()) {
      RatInterval next = roots[i + 1];
      Rat w_next = width;
      while (!(inner.hi < next.lo)) {
        w_next /= 2;
        inner = refine_root(chain, inner, w_next);
        next = refine_root(chain, next, w_next);
      }
      roots[i] = inner;
      roots[i + 1] = next;
      sample = (inner.hi + next.lo) / 2;
      outer = next;
    } else {
      sample = inner.hi + 1;
    }
    RingReport ring = make(inner, outer, sample);
    const std::size_t index = i + 1;  // 1-based among the punctured rings
    ring.cycle_prediction = (index >= 2 && index + 1 <= roots.size()) ? CyclePrediction::exactly_one_if_no_critical_points
                                                                      : CyclePrediction::at_most_one;
    rings.push_back(std::move(ring));
  }
  return rings;
}

struct Verdict {
  bool certified = false;
  std::string stage;  ///< first failing stage: "no-pair", "impossible", "defect", "phi"
  std::string reason;
};

/// Full audit record of one run of the certification pipeline.
struct Certificate {
  explicit Certificate(SystemSpec sys) : system(std::move(sys)) {}

  SystemSpec system;
  RatPoly p;
  std::optional<DulacPair> pair;
  RatPoly defect;
  NegativityWitness defect_witness;
  TrigRadialPoly M;
  RatPoly phi;
  NegativityWitness phi_witness;
  int m_plus = 0;
  std::vector<RingReport> rings;
  std::optional<int> C;
  std::optional<int> upper_bound;
  std::optional<int> lower_bound;
  Verdict verdict;
  std::vector<std::string> notes;

  /// The majorant coefficients m_i, indexed by radial power.
  [[nodiscard]] std::vector<Rat> m_i() const {
    return {phi.coeffs().begin(), phi.coeffs().end()};
  }
};

struct CertifyOptions {
  int max_denominator = 12;
  /// Denominator bounds tried after the default grid is exhausted.
  std::vector<int> widen = {24, 48};
};

namespace detail {

inline void run_pair(Certificate& cert, const PolarSystem& ps, const DulacPair& pair) {
  cert.pair = pair;
  cert.defect = dulac_defect(cert.p, pair.k(), pair.w());
  cert.M = TrigRadialPoly{};
  cert.phi = RatPoly{};
  cert.phi_witness = NegativityWitness{};
  cert.rings.clear();
  cert.upper_bound.reset();
  cert.m_plus = count_roots(pair.w(), RootRange::non_negative());
  if (cert.defect.is_zero()) {
    cert.defect_witness = NegativityWitness{};
    cert.defect_witness.reason = "defect vanishes identically";
    cert.verdict = {false, "defect", cert.defect_witness.reason};
    return;
  }
  cert.defect_witness = is_negative_on_positive_axis(cert.defect);
  if (!cert.defect_witness.negative) {
    cert.verdict = {false, "defect", "p_{k,w} not negative on (0,inf): " + cert.defect_witness.reason};
    return;
  }
  cert.M = build_M(ps, pair);
  cert.phi = l1_majorant(cert.M);
  if (cert.phi.is_zero()) {
    cert.phi_witness.reason = "majorant vanishes identically";
    cert.verdict = {false, "phi", cert.phi_witness.reason};
    return;
  }
  cert.phi_witness = is_negative_on_positive_axis(cert.phi);
  if (!cert.phi_witness.negative) {
    cert.verdict = {false, "phi", "Phi not negative on (0,inf): " + cert.phi_witness.reason};
    return;
  }
  cert.rings = ring_decomposition(pair.w(), cert.m_plus);
  cert.upper_bound = cert.m_plus;
  cert.verdict = {true, "", ""};
}

}  // namespace detail

/// Runs the pipeline polar form -> p -> Dulac pair -> M -> Phi -> rings.
/// With no pair supplied, candidates from propose_pairs are tried in order
/// and the first one passing both negativity checks is kept.
inline Certificate certify(const SystemSpec& sys, const std::optional<DulacPair>& pair = std::nullopt,
                           const CertifyOptions& opts = {}) {
  Certificate cert(sys);
  const PolarSystem ps = to_polar(sys);
  cert.p = radial_average(ps);
  if (pair) {
    detail::run_pair(cert, ps, *pair);
    return cert;
  }
  if (cert.p.is_zero()) {
    cert.verdict = {false, "no-pair", "NoDulacPairFound: radial average vanishes identically"};
    return cert;
  }
  std::vector<int> bounds{opts.max_denominator};
  bounds.insert(bounds.end(), opts.widen.begin(), opts.widen.end());
  std::optional<Certificate> first_phi_failure;
  std::vector<DulacPair> tried;
  for (std::size_t b = 0; b < bounds.size(); ++b) {
    const PairProposal proposal = propose_pairs(cert.p, bounds[b]);
    if (proposal.impossible) {
      cert.verdict = {false, "impossible", proposal.reason};
      return cert;
    }
    if (b > 0) cert.notes.push_back("k grid widened to denominator <= " + std::to_string(bounds[b]));
    for (const auto& cand : proposal.candidates) {
      if (std::find(tried.begin(), tried.end(), cand) != tried.end()) continue;
      tried.push_back(cand);
      Certificate trial = cert;
      detail::run_pair(trial, ps, cand);
      if (trial.verdict.certified) return trial;
      if (trial.verdict.stage == "phi" && !first_phi_failure) first_phi_failure = std::move(trial);
    }
  }
  if (first_phi_failure) return *first_phi_failure;
  cert.verdict = {false, "no-pair", "NoDulacPairFound: every candidate failed the defect check"};
  return cert;
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// C = number of bounded punctured rings R_1..R_{m+ - 1} holding a supplied
/// critical point; returns max(0, m+ - 2 - C). Annotates every ring.
inline std::optional<int> lower_bound(Certificate& cert, const std::vector<Point2>& critical_points) {
  if (!cert.verdict.certified) throw std::invalid_argument("lower_bound: certificate not certified");
  if (critical_points.empty()) {
    for (auto& ring : cert.rings) ring.contains_critical_points = Presence::unknown;
    cert.C.reset();
    cert.lower_bound.reset();
    return std::nullopt;
  }
  int c = 0;
  for (auto& ring : cert.rings) {
    bool hit = false;
    for (const auto& pt : critical_points) {
      if (ring.simply_connected ? (!ring.outer || std::hypot(pt.x, pt.y) < ring.outer->lo.get_d())
                                : ring.contains_radius(std::hypot(pt.x, pt.y))) {
        hit = true;
      }
    }
    ring.contains_critical_points = hit ? Presence::yes : Presence::no;
    if (hit && !ring.simply_connected && ring.bounded()) ++c;
  }
  cert.C = c;
  cert.lower_bound = std::max(0, cert.m_plus - 2 - c);
  return cert.lower_bound;
}

struct InvalidPerturbationDegrees : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MarginRow {
  Rat eps;
  bool certified = false;
  std::optional<int> upper_bound;
  std::string stage;
  std::string reason;
};

struct MarginResult {
  std::optional<Rat> k;  ///< fixed from the eps = 0 search
  std::vector<MarginRow> rows;
  std::optional<Rat> largest_certified;
  bool prefix = true;  ///< certified entries form a prefix of the grid
};

/// The rotational system (u, v) plus eps (Pt, Qt).
inline SystemSpec perturbed_system(const RatPoly& u, const RatPoly& v, const BiPoly& Pt, const BiPoly& Qt,
                                   const Rat& eps) {
  const SystemSpec base = rotational_system(u, v);
  return SystemSpec(base.P() + Pt * eps, base.Q() + Qt * eps);
}

inline bool all_roots_real_simple(const RatPoly& u) {
  if (u.degree() < 1) return false;
  if (square_free(u).degree() != u.degree()) return false;
  return SturmChain(u).count_all() == u.degree();
}

/// Certifies rotational(u, v) + eps (Pt, Qt) for every eps in the grid with
/// the pair (k, r^2 p_eps'(r^2)). k is the first grid value certifying eps = 0
/// whose defect starts at r^2, else the first grid value certifying eps = 0.
inline MarginResult certification_margin(const RatPoly& u, const RatPoly& v, const BiPoly& Pt, const BiPoly& Qt,
                                         const std::vector<Rat>& eps_grid, const CertifyOptions& opts = {}) {
  const int j = u.degree();
  if (!all_roots_real_simple(u)) throw std::invalid_argument("certification_margin: u needs real simple roots");
  for (const BiPoly* q : {&Pt, &Qt}) {
    for (const auto& [e, c] : q->terms()) {
      const int deg = e.first + e.second;
      if (deg < 2 || deg > 2 * j + 1) {
        throw InvalidPerturbationDegrees("InvalidPerturbationDegrees: monomial degree " + std::to_string(deg) +
                                         " outside [2, " + std::to_string(2 * j + 1) + "]");
      }
    }
  }
  MarginResult out;
  const SystemSpec base = rotational_system(u, v);
  const RatPoly w0 = derivative_weight(u);
  std::vector<int> bounds{opts.max_denominator};
  bounds.insert(bounds.end(), opts.widen.begin(), opts.widen.end());
  std::optional<Rat> fallback;
  for (int b : bounds) {
    for (const auto& k : k_grid(b)) {
      const Certificate c0 = certify(base, DulacPair(k, w0));
      if (!c0.verdict.certified) continue;
      if (!fallback) fallback = k;
      if (c0.defect_witness.stripped_power == 2) {
        out.k = k;
        break;
      }
    }
    if (out.k) break;
  }
  if (!out.k) out.k = fallback;
  bool failed_seen = false;
  for (const auto& eps : eps_grid) {
    MarginRow row;
    row.eps = eps;
    if (out.k) {
      const SystemSpec sys = perturbed_system(u, v, Pt, Qt, eps);
      const RatPoly p_eps = radial_average(to_polar(sys));
      const RatPoly w_eps = derivative_weight(p_eps);
      if (w_eps.is_zero()) {
        row.stage = "no-pair";
        row.reason = "w vanishes identically";
      } else {
        const Certificate cert = certify(sys, DulacPair(*out.k, w_eps));
        row.certified = cert.verdict.certified;
        row.upper_bound = cert.upper_bound;
        row.stage = cert.verdict.stage;
        row.reason = cert.verdict.reason;
      }
    } else {
      row.stage = "no-pair";
      row.reason = "no k certifies eps = 0";
    }
    if (row.certified) {
      if (failed_seen) out.prefix = false;
      if (!out.largest_certified || eps > *out.largest_certified) out.largest_certified = eps;
    } else {
      failed_seen = true;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace cyclecert

#endif  // CYCLECERT_CERTIFY_HPP
