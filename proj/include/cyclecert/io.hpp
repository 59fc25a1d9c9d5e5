#ifndef CYCLECERT_IO_HPP
#define CYCLECERT_IO_HPP

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclecert/certify.hpp"

#ifndef CYCLECERT_VERSION
#define CYCLECERT_VERSION "0.0.0"
#endif

namespace cyclecert::io {

using Json = nlohmann::ordered_json;

/// Malformed system file, bad expression, unknown parameter, bad grid.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Params = std::map<std::string, Rat>;

// ---------------------------------------------------------------------------
// rational expressions

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string text, const Params& params) : s_(std::move(text)), params_(params) {}

  Rat parse() {
    Rat v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("expression \"" + s_ + "\": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Rat expr() {
    Rat v = term();
    for (;;) {
      if (eat('+')) {
        v += term();
      } else if (eat('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  Rat term() {
    Rat v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        Rat d = unary();
        if (sgn(d) == 0) fail("division by zero");
        v /= d;
      } else {
        return v;
      }
    }
  }

  Rat unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Rat power() {
    Rat base = atom();
    if (!eat('^')) return base;
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    const unsigned long e = std::stoul(s_.substr(start, pos_ - start));
    if (e > 64) fail("exponent too large");
    Rat v = 1;
    for (unsigned long i = 0; i < e; ++i) v *= base;
    return v;
  }

  Rat atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Rat v = expr();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Rat(mpz_class(s_.substr(start, pos_ - start), 10));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      auto it = params_.find(name);
      if (it == params_.end()) fail("unknown parameter '" + name + "'");
      return it->second;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  const Params& params_;
  std::size_t pos_ = 0;
};

/// U+2212 MINUS SIGN to ASCII '-'.
inline std::string ascii_minus(const std::string& in) {
  std::string out;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i + 2 < in.size() && static_cast<unsigned char>(in[i]) == 0xE2 && static_cast<unsigned char>(in[i + 1]) == 0x88 &&
        static_cast<unsigned char>(in[i + 2]) == 0x92) {
      out.push_back('-');
      i += 2;
    } else {
      out.push_back(in[i]);
    }
  }
  return out;
}

}  // namespace detail

/// Exact value of an expression over integers, named parameters, + - * / ^ and parentheses.
inline Rat eval_expr(const std::string& text, const Params& params = {}) {
  return detail::ExprParser(detail::ascii_minus(text), params).parse();
}

// ---------------------------------------------------------------------------
// system files

struct TermSpec {
  std::string c;
  int i = 0;
  int j = 0;
};

struct PairSpec {
  std::string k;
  std::vector<std::string> w;
};

struct RotationalSpec {
  std::vector<std::string> u;
  std::vector<std::string> v;
};

/// Parsed but unevaluated system file. Coefficients stay expressions until
/// parameters are bound.
struct SystemFile {
  std::string name;
  std::string description;
  std::vector<TermSpec> P;
  std::vector<TermSpec> Q;
  std::optional<PairSpec> pair;
  std::vector<std::pair<std::string, std::string>> params;  ///< declaration order
  std::optional<RotationalSpec> rotational;
  std::optional<std::pair<std::vector<TermSpec>, std::vector<TermSpec>>> perturbation;

  [[nodiscard]] bool has_param(const std::string& n) const {
    for (const auto& [k, v] : params) {
      if (k == n) return true;
    }
    return false;
  }
};

namespace detail {

inline std::string coefficient_text(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError(where + ": coefficients must be rational strings");
}

inline std::vector<TermSpec> parse_terms(const Json& arr, const std::string& where) {
  if (!arr.is_array()) throw InputError(where + ": expected a list of monomials");
  std::vector<TermSpec> out;
  for (const auto& t : arr) {
    if (!t.is_object() || !t.contains("c") || !t.contains("i") || !t.contains("j")) {
      throw InputError(where + ": monomials are {\"c\", \"i\", \"j\"} objects");
    }
    if (!t["i"].is_number_integer() || !t["j"].is_number_integer() || t["i"].get<int>() < 0 || t["j"].get<int>() < 0) {
      throw InputError(where + ": exponents must be non-negative integers");
    }
    out.push_back({coefficient_text(t["c"], where), t["i"].get<int>(), t["j"].get<int>()});
  }
  return out;
}

inline std::vector<std::string> parse_coeff_list(const Json& arr, const std::string& where) {
  if (!arr.is_array()) throw InputError(where + ": expected a coefficient list");
  std::vector<std::string> out;
  for (const auto& c : arr) out.push_back(coefficient_text(c, where));
  return out;
}

}  // namespace detail

inline SystemFile parse_system_file(const Json& j) {
  if (!j.is_object()) throw InputError("system file: top level must be an object");
  SystemFile f;
  f.name = j.value("name", std::string{});
  f.description = j.value("description", std::string{});
  if (j.contains("P")) f.P = detail::parse_terms(j["P"], "P");
  if (j.contains("Q")) f.Q = detail::parse_terms(j["Q"], "Q");
  if (j.contains("pair")) {
    const auto& p = j["pair"];
    if (!p.is_object() || !p.contains("k") || !p.contains("w")) throw InputError("pair: needs \"k\" and \"w\"");
    f.pair = PairSpec{detail::coefficient_text(p["k"], "pair.k"), detail::parse_coeff_list(p["w"], "pair.w")};
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw InputError("params: expected an object");
    for (const auto& [k, v] : j["params"].items()) f.params.emplace_back(k, detail::coefficient_text(v, "params." + k));
  }
  if (j.contains("rotational")) {
    const auto& r = j["rotational"];
    if (!r.is_object() || !r.contains("u") || !r.contains("v")) throw InputError("rotational: needs \"u\" and \"v\"");
    f.rotational = RotationalSpec{detail::parse_coeff_list(r["u"], "rotational.u"),
                                  detail::parse_coeff_list(r["v"], "rotational.v")};
  }
  if (j.contains("perturbation")) {
    const auto& r = j["perturbation"];
    if (!r.is_object()) throw InputError("perturbation: expected an object");
    f.perturbation.emplace(detail::parse_terms(r.value("P", Json::array()), "perturbation.P"),
                           detail::parse_terms(r.value("Q", Json::array()), "perturbation.Q"));
  }
  if (f.P.empty() && f.Q.empty() && !f.rotational) throw InputError("system file: no P, Q or rotational part");
  return f;
}

inline SystemFile load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  SystemFile f = parse_system_file(j);
  if (f.name.empty()) f.name = path;
  return f;
}

/// Parameter values: file defaults first (each may refer to earlier ones),
/// then overrides. Overriding an undeclared name is an error.
inline Params resolve_params(const SystemFile& f, const Params& overrides = {}) {
  for (const auto& [k, v] : overrides) {
    if (!f.has_param(k)) throw InputError("unknown parameter '" + k + "'");
  }
  Params out;
  for (const auto& [k, text] : f.params) {
    auto it = overrides.find(k);
    out[k] = it != overrides.end() ? it->second : eval_expr(text, out);
  }
  return out;
}

inline BiPoly build_poly(const std::vector<TermSpec>& terms, const Params& params) {
  BiPoly p;
  for (const auto& t : terms) p.add_term(eval_expr(t.c, params), t.i, t.j);
  return p;
}

inline RatPoly build_univariate(const std::vector<std::string>& coeffs, const Params& params) {
  std::vector<Rat> c;
  for (const auto& s : coeffs) c.push_back(eval_expr(s, params));
  return RatPoly(std::move(c));
}

inline std::pair<BiPoly, BiPoly> perturbation_of(const SystemFile& f, const Params& params) {
  if (!f.perturbation) return {};
  return {build_poly(f.perturbation->first, params), build_poly(f.perturbation->second, params)};
}

/// The vector field: rotational part (if any) + P, Q terms + eps * perturbation,
/// where eps is the parameter of that name (0 when undeclared).
inline SystemSpec build_system(const SystemFile& f, const Params& params) {
  BiPoly P = build_poly(f.P, params);
  BiPoly Q = build_poly(f.Q, params);
  if (f.rotational) {
    const SystemSpec rot = rotational_system(build_univariate(f.rotational->u, params),
                                             build_univariate(f.rotational->v, params));
    P = P + rot.P();
    Q = Q + rot.Q();
  }
  if (f.perturbation) {
    auto it = params.find("eps");
    const Rat eps = it == params.end() ? Rat(0) : it->second;
    const auto [Pt, Qt] = perturbation_of(f, params);
    P = P + Pt * eps;
    Q = Q + Qt * eps;
  }
  return SystemSpec(P, Q);
}

inline std::optional<DulacPair> build_pair(const SystemFile& f, const Params& params) {
  if (!f.pair) return std::nullopt;
  return DulacPair(eval_expr(f.pair->k, params), build_univariate(f.pair->w, params));
}

/// "name=value" with an exact rational value (expressions allowed, no parameters).
inline std::pair<std::string, Rat> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("expected name=value, got '" + text + "'");
  return {text.substr(0, eq), eval_expr(text.substr(eq + 1))};
}

/// "v1,v2,..." or "lo:hi:n" (n >= 2 equally spaced values including both ends).
inline std::vector<Rat> parse_grid(const std::string& spec) {
  std::vector<Rat> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw InputError("grid '" + spec + "': expected lo:hi:n");
    const Rat lo = eval_expr(parts[0]);
    const Rat hi = eval_expr(parts[1]);
    long n = 0;
    try {
      std::size_t used = 0;
      n = std::stol(parts[2], &used);
      if (used != parts[2].size()) n = 0;
    } catch (const std::exception&) {
      n = 0;
    }
    if (n < 2 || n > 100000) throw InputError("grid '" + spec + "': count must be an integer in [2, 100000]");
    if (hi < lo) throw InputError("grid '" + spec + "': hi < lo");
    for (long i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * ratio(i, n - 1));
    return out;
  }
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ',');) {
    if (part.find_first_not_of(" \t") == std::string::npos) throw InputError("grid '" + spec + "': empty entry");
    out.push_back(eval_expr(part));
  }
  if (out.empty()) throw InputError("grid '" + spec + "' is empty");
  return out;
}

// ---------------------------------------------------------------------------
// certificate documents

inline Json rat_json(const Rat& q) { return to_string(q); }

inline Json poly_json(const RatPoly& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_string(c));
  return a;
}

inline Json terms_json(const BiPoly& p) {
  Json a = Json::array();
  for (const auto& [e, c] : p.terms()) a.push_back({{"c", to_string(c)}, {"i", e.first}, {"j", e.second}});
  return a;
}

inline Json interval_json(const RatInterval& iv) {
  return {{"lo", to_string(iv.lo)}, {"hi", to_string(iv.hi)}, {"approx", iv.approx()}};
}

inline Json witness_json(const NegativityWitness& w) {
  return {{"negative", w.negative},         {"stripped_power", w.stripped_power},
          {"positive_roots", w.positive_roots}, {"sample", to_string(w.sample)},
          {"sample_value", to_string(w.sample_value)}, {"leading", to_string(w.leading)},
          {"reason", w.reason}};
}

inline Json slices_json(const TrigRadialPoly& M) {
  Json a = Json::array();
  for (const auto& [power, s] : M.slices()) {
    Json cs = Json::array();
    Json ss = Json::array();
    for (const auto& [j, c] : s.cos_coeffs()) cs.push_back({{"j", j}, {"c", to_string(c)}});
    for (const auto& [j, c] : s.sin_coeffs()) ss.push_back({{"j", j}, {"c", to_string(c)}});
    a.push_back({{"power", power}, {"a0", to_string(s.a0())}, {"cos", cs}, {"sin", ss}});
  }
  return a;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

struct DocOptions {
  std::string name;
  std::optional<double> seconds;  ///< timing; omitted when unset
};

inline Json certificate_json(const Certificate& c, const DocOptions& opt = {}) {
  Json j;
  j["system"] = {{"name", opt.name}, {"P", terms_json(c.system.P())}, {"Q", terms_json(c.system.Q())}};
  j["p"] = poly_json(c.p);
  j["k"] = c.pair ? Json(to_string(c.pair->k())) : Json(nullptr);
  j["w"] = c.pair ? poly_json(c.pair->w()) : Json(nullptr);
  j["defect"] = poly_json(c.defect);
  j["M_slices"] = slices_json(c.M);
  j["m_i"] = poly_json(c.phi);
  j["phi"] = poly_json(c.phi);
  j["m_plus"] = c.m_plus;
  Json rings = Json::array();
  for (const auto& r : c.rings) {
    rings.push_back({{"inner", interval_json(r.inner)},
                     {"outer", r.outer ? interval_json(*r.outer) : Json(nullptr)},
                     {"w_sign", r.w_sign},
                     {"simply_connected", r.simply_connected},
                     {"contains_critical_points", to_string(r.contains_critical_points)},
                     {"cycle_prediction", to_string(r.cycle_prediction)},
                     {"stability_if_exists", to_string(r.stability_if_exists)}});
  }
  j["rings"] = rings;
  j["C"] = optional_json(c.C);
  j["upper_bound"] = optional_json(c.upper_bound);
  j["lower_bound"] = optional_json(c.lower_bound);
  j["verdict"] = {{"certified", c.verdict.certified}, {"stage", c.verdict.stage}, {"reason", c.verdict.reason}};
  j["sturm_witnesses"] = {{"defect", witness_json(c.defect_witness)}, {"phi", witness_json(c.phi_witness)}};
  j["version"] = CYCLECERT_VERSION;
  j["notes"] = c.notes;
  if (opt.seconds) j["timing"] = {{"seconds", *opt.seconds}};
  return j;
}

// ---------------------------------------------------------------------------
// re-verification from a document

namespace detail {

inline Rat rat_field(const Json& v, const std::string& where) {
  if (!v.is_string()) throw InputError(where + ": expected a rational string");
  try {
    return parse_rat(v.get<std::string>());
  } catch (const RationalParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline RatPoly poly_field(const Json& v, const std::string& where) {
  if (!v.is_array()) throw InputError(where + ": expected a coefficient list");
  std::vector<Rat> c;
  for (const auto& x : v) c.push_back(rat_field(x, where));
  return RatPoly(std::move(c));
}

inline BiPoly terms_field(const Json& v, const std::string& where) {
  BiPoly p;
  for (const auto& t : parse_terms(v, where)) p.add_term(parse_rat(t.c), t.i, t.j);
  return p;
}

inline TrigRadialPoly slices_field(const Json& v) {
  if (!v.is_array()) throw InputError("M_slices: expected a list");
  TrigRadialPoly M;
  for (const auto& s : v) {
    FourierSlice f(rat_field(s.at("a0"), "M_slices.a0"));
    for (const auto& h : s.at("cos")) f.add_cos(h.at("j").get<int>(), rat_field(h.at("c"), "M_slices.cos"));
    for (const auto& h : s.at("sin")) f.add_sin(h.at("j").get<int>(), rat_field(h.at("c"), "M_slices.sin"));
    M.add_slice(s.at("power").get<int>(), f);
  }
  return M;
}

}  // namespace detail

struct VerifyReport {
  bool claimed = false;   ///< verdict stated in the document
  bool verified = false;  ///< verdict recomputed from the document
  std::vector<std::string> failures;
  [[nodiscard]] bool agrees() const { return claimed == verified && failures.empty(); }
};

/// Recomputes every exact claim of a certificate document: p from the system,
/// the defect from (p, k, w), Phi from the stored slices, the slices from the
/// system and pair, both negativity decisions by Sturm, and m+.
inline VerifyReport verify_certificate(const Json& doc) {
  VerifyReport rep;
  try {
    rep.claimed = doc.at("verdict").at("certified").get<bool>();
    const SystemSpec sys(detail::terms_field(doc.at("system").at("P"), "system.P"),
                         detail::terms_field(doc.at("system").at("Q"), "system.Q"));
    const RatPoly p = detail::poly_field(doc.at("p"), "p");
    const PolarSystem ps = to_polar(sys);
    if (radial_average(ps) != p) rep.failures.push_back("p does not match the system");
    if (doc.at("k").is_null() || doc.at("w").is_null()) {
      if (rep.claimed) rep.failures.push_back("certified document without a pair");
      return rep;
    }
    const DulacPair pair(detail::rat_field(doc.at("k"), "k"), detail::poly_field(doc.at("w"), "w"));
    const RatPoly defect = detail::poly_field(doc.at("defect"), "defect");
    if (dulac_defect(p, pair.k(), pair.w()) != defect) rep.failures.push_back("defect does not match (p, k, w)");
    const bool defect_ok = !defect.is_zero() && is_negative_on_positive_axis(defect).negative;
    bool phi_ok = false;
    if (defect_ok) {
      const TrigRadialPoly M = detail::slices_field(doc.at("M_slices"));
      if (!(build_M(ps, pair) == M)) rep.failures.push_back("M_slices do not match the system and pair");
      const RatPoly phi = detail::poly_field(doc.at("phi"), "phi");
      if (l1_majorant(M) != phi) rep.failures.push_back("phi is not the L1 majorant of M_slices");
      if (detail::poly_field(doc.at("m_i"), "m_i") != phi) rep.failures.push_back("m_i differs from phi");
      phi_ok = !phi.is_zero() && is_negative_on_positive_axis(phi).negative;
    }
    rep.verified = defect_ok && phi_ok;
    const int m_plus = count_roots(pair.w(), RootRange::non_negative());
    if (doc.at("m_plus").get<int>() != m_plus) rep.failures.push_back("m_plus does not match w");
    if (rep.verified) {
      const auto& ub = doc.at("upper_bound");
      if (ub.is_null() || ub.get<int>() != m_plus) rep.failures.push_back("upper_bound differs from m_plus");
    }
  } catch (const std::exception& e) {
    rep.failures.push_back(std::string("malformed certificate: ") + e.what());
  }
  return rep;
}

}  // namespace cyclecert::io

#endif  // CYCLECERT_IO_HPP
