#ifndef CYCLECERT_STURM_HPP
#define CYCLECERT_STURM_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cyclecert/ratpoly.hpp"

namespace cyclecert {

/// Closed rational interval [lo, hi]; lo == hi marks an exactly known root.
struct RatInterval {
  Rat lo;
  Rat hi;

  [[nodiscard]] bool exact() const { return lo == hi; }
  [[nodiscard]] Rat width() const { return hi - lo; }
  [[nodiscard]] Rat mid() const { return (lo + hi) / 2; }
  [[nodiscard]] double approx() const { return mid().get_d(); }
  friend bool operator==(const RatInterval&, const RatInterval&) = default;
};

/// Signed remainder sequence of the square-free part of a polynomial.
/// Every element is scaled to |leading coefficient| = 1, which keeps
/// the sign pattern and limits coefficient growth.
class SturmChain {
 public:
  explicit SturmChain(const RatPoly& source) : source_(source) {
    if (source.is_zero()) throw ZeroPolynomial();
    RatPoly a = square_free(source);
    chain_.push_back(a);
    if (a.degree() < 1) return;
    RatPoly b = normalize(derivative(a));
    while (!b.is_zero()) {
      chain_.push_back(b);
      RatPoly r = divmod(a, b).second;
      a = std::move(b);
      b = normalize(-r);
    }
  }

  [[nodiscard]] const RatPoly& source() const { return source_; }
  [[nodiscard]] const std::vector<RatPoly>& chain() const { return chain_; }
  [[nodiscard]] const RatPoly& square_free_part() const { return chain_.front(); }

  /// Sign variations of the chain evaluated at x, zeros dropped.
  [[nodiscard]] int variations_at(const Rat& x) const {
    std::vector<int> s;
    s.reserve(chain_.size());
    for (const auto& p : chain_) s.push_back(p.sign_at(x));
    return count_variations(s);
  }

  [[nodiscard]] int variations_at_pos_inf() const {
    std::vector<int> s;
    for (const auto& p : chain_) s.push_back(sgn(p.leading()));
    return count_variations(s);
  }

  [[nodiscard]] int variations_at_neg_inf() const {
    std::vector<int> s;
    for (const auto& p : chain_) s.push_back((p.degree() % 2 == 0 ? 1 : -1) * sgn(p.leading()));
    return count_variations(s);
  }

  /// Distinct roots in (a, b].
  [[nodiscard]] int count_half_open(const Rat& a, const Rat& b) const {
    if (b <= a) return 0;
    return variations_at(a) - variations_at(b);
  }

  [[nodiscard]] int count_all() const { return variations_at_neg_inf() - variations_at_pos_inf(); }

 private:
  static RatPoly normalize(const RatPoly& p) {
    if (p.is_zero()) return p;
    return p * Rat(1 / abs_rat(p.leading()));
  }

  static int count_variations(const std::vector<int>& signs) {
    int v = 0;
    int last = 0;
    for (int s : signs) {
      if (s == 0) continue;
      if (last != 0 && s != last) ++v;
      last = s;
    }
    return v;
  }

  RatPoly source_;
  std::vector<RatPoly> chain_;
};

/// Interval kinds accepted by count_roots.
struct RootRange {
  enum class Kind { half_open, positive_ray, non_negative_ray };
  Kind kind = Kind::non_negative_ray;
  Rat lo;
  Rat hi;

  /// (a, b]
  static RootRange half_open(Rat a, Rat b) { return {Kind::half_open, std::move(a), std::move(b)}; }
  /// (0, inf)
  static RootRange positive() { return {Kind::positive_ray, 0, 0}; }
  /// [0, inf)
  static RootRange non_negative() { return {Kind::non_negative_ray, 0, 0}; }
};

inline int count_roots(const SturmChain& chain, const RootRange& range) {
  switch (range.kind) {
    case RootRange::Kind::half_open: return chain.count_half_open(range.lo, range.hi);
    case RootRange::Kind::positive_ray: return chain.variations_at(Rat(0)) - chain.variations_at_pos_inf();
    case RootRange::Kind::non_negative_ray: {
      const int zero_root = chain.square_free_part().sign_at(Rat(0)) == 0 ? 1 : 0;
      return chain.variations_at(Rat(0)) - chain.variations_at_pos_inf() + zero_root;
    }
  }
  return 0;
}

/// Number of distinct real roots of p in the range.
inline int count_roots(const RatPoly& p, const RootRange& range) { return count_roots(SturmChain(p), range); }

/// Audit record of a negativity decision on the open ray (0, inf).
struct NegativityWitness {
  bool negative = false;
  std::size_t stripped_power = 0;  ///< p = r^m q with q(0) != 0
  int positive_roots = 0;          ///< distinct roots of q in (0, inf)
  Rat sample = 1;
  Rat sample_value;
  Rat leading;
  std::string reason;
};

/// Decides p(r) < 0 for every r > 0. After factoring out r^m, the cofactor
/// must have no root in (0, inf), a negative value at r = 1 and a negative
/// leading coefficient.
inline NegativityWitness is_negative_on_positive_axis(const RatPoly& p) {
  if (p.is_zero()) throw ZeroPolynomial();
  NegativityWitness w;
  w.stripped_power = p.lowest_power();
  const RatPoly q = shift_down(p, w.stripped_power);
  w.positive_roots = count_roots(q, RootRange::positive());
  w.sample_value = q.eval(w.sample);
  w.leading = q.leading();
  if (w.positive_roots != 0) {
    w.reason = "sign change or zero on (0, inf): " + std::to_string(w.positive_roots) + " distinct positive root(s)";
  } else if (sgn(w.sample_value) >= 0) {
    w.reason = "non-negative value at r = 1";
  } else if (sgn(w.leading) >= 0) {
    w.reason = "non-negative leading coefficient";
  } else {
    w.negative = true;
  }
  return w;
}

/// Cauchy bound: every real root lies in (-B, B).
inline Rat root_bound(const RatPoly& p) {
  if (p.is_zero()) throw ZeroPolynomial();
  Rat m = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    Rat v = abs_rat(p.coeff(i) / p.leading());
    if (v > m) m = v;
  }
  return m + 1;
}

/// Narrows an isolating interval (lo, hi] (or [lo, hi] when exact) below width.
inline RatInterval refine_root(const SturmChain& chain, RatInterval iv, const Rat& width) {
  const RatPoly& sf = chain.square_free_part();
  if (iv.exact()) return iv;
  if (sf.sign_at(iv.hi) == 0) return {iv.hi, iv.hi};
  while (iv.width() > width) {
    Rat m = iv.mid();
    if (sf.sign_at(m) == 0) return {m, m};
    if (chain.count_half_open(iv.lo, m) == 1) {
      iv.hi = m;
    } else {
      iv.lo = m;
    }
  }
  return iv;
}

/// Isolating intervals for the distinct roots in (lo, hi], ordered left to right.
/// Each interval (a, b] contains exactly one root; exact roots are [r, r].
inline std::vector<RatInterval> isolate_roots_in(const SturmChain& chain, const Rat& lo, const Rat& hi,
                                                 const std::optional<Rat>& width = std::nullopt) {
  const RatPoly& sf = chain.square_free_part();
  std::vector<RatInterval> out;
  if (sf.degree() < 1 || hi <= lo) return out;
  std::vector<RatInterval> stack{{lo, hi}};
  while (!stack.empty()) {
    RatInterval iv = stack.back();
    stack.pop_back();
    const int n = chain.count_half_open(iv.lo, iv.hi);
    if (n == 0) continue;
    if (n == 1) {
      out.push_back(iv);
      continue;
    }
    Rat m = iv.mid();
    // right half below left half on the stack, so output stays ordered
    stack.push_back({m, iv.hi});
    stack.push_back({iv.lo, m});
  }
  for (auto& iv : out) {
    if (sf.sign_at(iv.hi) == 0) iv = {iv.hi, iv.hi};
  }
  if (width) {
    for (auto& iv : out) iv = refine_root(chain, iv, *width);
  }
  return out;
}

/// One isolating interval per distinct real root, ordered left to right.
inline std::vector<RatInterval> real_roots_isolated(const SturmChain& chain,
                                                    const std::optional<Rat>& width = std::nullopt) {
  if (chain.square_free_part().degree() < 1) return {};
  const Rat b = root_bound(chain.square_free_part());
  return isolate_roots_in(chain, Rat(-b), b, width);
}

/// Roots in (0, inf) only.
inline std::vector<RatInterval> positive_roots_isolated(const SturmChain& chain,
                                                        const std::optional<Rat>& width = std::nullopt) {
  if (chain.square_free_part().degree() < 1) return {};
  return isolate_roots_in(chain, Rat(0), root_bound(chain.square_free_part()), width);
}

inline std::vector<RatInterval> real_roots_isolated(const RatPoly& p, const std::optional<Rat>& width = std::nullopt) {
  return real_roots_isolated(SturmChain(p), width);
}

}  // namespace cyclecert

#endif  // CYCLECERT_STURM_HPP
