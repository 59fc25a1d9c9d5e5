#ifndef CYCLECERT_RATIONAL_HPP
#define CYCLECERT_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace cyclecert {

/// Exact rational number, always kept in lowest terms with a positive denominator.
using Rat = mpq_class;

/// Raised when a textual rational literal cannot be parsed.
struct RationalParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parses "int" or "num/den" (optional leading sign, surrounding blanks allowed).
inline Rat parse_rat(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  if (s.empty()) throw RationalParseError("empty rational literal");
  std::size_t pos = 0;
  bool neg = false;
  if (s[pos] == '+' || s[pos] == '-') {
    neg = s[pos] == '-';
    ++pos;
  }
  const auto slash = s.find('/', pos);
  auto digits_ok = [&](std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t i = from; i < to; ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
  };
  const std::size_t num_end = slash == std::string::npos ? s.size() : slash;
  if (!digits_ok(pos, num_end)) throw RationalParseError("bad rational literal: " + s);
  mpz_class num(s.substr(pos, num_end - pos), 10);
  mpz_class den = 1;
  if (slash != std::string::npos) {
    if (!digits_ok(slash + 1, s.size())) throw RationalParseError("bad rational literal: " + s);
    den = mpz_class(s.substr(slash + 1), 10);
    if (den == 0) throw RationalParseError("zero denominator: " + s);
  }
  Rat q(neg ? mpz_class(-num) : num, den);
  q.canonicalize();
  return q;
}

/// Canonical "num/den" or "int" rendering; inverse of parse_rat.
inline std::string to_string(const Rat& q) { return q.get_str(10); }

inline int sign(const Rat& q) { return sgn(q); }

/// n / d in canonical form.
inline Rat ratio(long n, long d) {
  Rat q(n, d);
  q.canonicalize();
  return q;
}

inline Rat abs_rat(const Rat& q) { return sgn(q) < 0 ? Rat(-q) : q; }

inline double to_double(const Rat& q) { return q.get_d(); }

/// Exact binary rational equal to the double (every finite double is dyadic).
inline Rat from_double(double v) {
  Rat q(v);
  q.canonicalize();
  return q;
}

}  // namespace cyclecert

#endif  // CYCLECERT_RATIONAL_HPP
