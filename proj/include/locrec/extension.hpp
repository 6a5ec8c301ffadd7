#pragma once

// Tame abelian extensions in the canonical model
//
//   K = k((t)),   L = l((alpha)),   alpha^e = u0 * t,   u0 in l*,
//
// with e | q - 1 and gcd(e, p) = 1. An automorphism is the pair (a, c): it
// acts on residues as x -> x^{q^a} and sends alpha to c * alpha. Applying g to
// alpha^e = u0 t forces c^e = u0^{q^a - 1}; conversely every such pair is an
// automorphism, so Gal(L/K) has exactly e*f elements.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "locrec/errors.hpp"
#include "locrec/ffield.hpp"
#include "locrec/series.hpp"
#include "locrec/smith.hpp"

namespace locrec {

inline const std::string kBaseSymbol = "t";
inline const std::string kExtSymbol = "alpha";

namespace detail {
struct ExtensionData {
  TowerPtr tower;
  std::uint32_t e;
  FieldElement u0;
  std::size_t precision;
};

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}
}  // namespace detail

class TameAbelianExtension {
 public:
  static constexpr std::uint64_t kMaxDegree = 64;

  /// Validates and builds the extension. `u0` is parsed as "g^k" or a
  /// coefficient list in the residue field l = F_{p^{tf}}.
  static TameAbelianExtension construct(std::uint32_t p, std::uint32_t t, std::uint32_t f, std::uint32_t e,
                                        std::string_view u0, std::size_t precision = LaurentSeries::kDefaultPrecision,
                                        TableMode mode = TableMode::Auto) {
    if (!nt::is_prime(p)) throw InvalidExtension("p = " + std::to_string(p) + " is not prime");
    if (t == 0 || f == 0 || e == 0) throw InvalidExtension("t, f and e must be positive");
    check_degrees(p, t, f, e);
    TowerPtr tower;
    try {
      tower = FieldTower::create(p, t, f, mode);
    } catch (const std::overflow_error&) {
      throw InvalidExtension("residue field larger than 2^20 elements");
    }
    return construct(tower, e, parse_element(tower, u0), precision);
  }

  static TameAbelianExtension construct(const TowerPtr& tower, std::uint32_t e, const FieldElement& u0,
                                        std::size_t precision = LaurentSeries::kDefaultPrecision) {
    check_degrees(tower->characteristic(), tower->base_degree(), tower->relative_degree(), e);
    if (!same_tower(u0.tower(), tower)) throw TowerMismatch();
    if (u0.is_zero()) throw InvalidExtension("u0 must be a unit");
    if (precision == 0) throw InvalidExtension("precision must be positive");
    return TameAbelianExtension(std::make_shared<const detail::ExtensionData>(
        detail::ExtensionData{tower, e, FieldElement(tower, u0.code()), precision}));
  }

  const TowerPtr& tower() const { return data_->tower; }
  std::uint32_t p() const { return tower()->characteristic(); }
  std::uint32_t t() const { return tower()->base_degree(); }
  std::uint32_t f() const { return tower()->relative_degree(); }
  std::uint32_t e() const { return data_->e; }
  std::uint64_t q() const { return tower()->base_order(); }
  std::uint64_t degree() const { return std::uint64_t{e()} * f(); }
  const FieldElement& u0() const { return data_->u0; }
  std::size_t precision() const { return data_->precision; }

  /// Same extension data (identical parameters and u0).
  bool operator==(const TameAbelianExtension& o) const {
    return data_ == o.data_ || (same_tower(tower(), o.tower()) && e() == o.e() && u0() == o.u0() &&
                                precision() == o.precision());
  }

  /// Same copy of L/K with precision allowed to differ.
  bool same_field(const TameAbelianExtension& o) const {
    return data_ == o.data_ || (same_tower(tower(), o.tower()) && e() == o.e() && u0() == o.u0());
  }

  TameAbelianExtension with_precision(std::size_t precision) const {
    return construct(tower(), e(), u0(), precision);
  }

  std::string describe() const {
    std::ostringstream os;
    os << "(p=" << p() << ", t=" << t() << ", f=" << f() << ", e=" << e() << ", u0=" << u0().to_power_string()
       << ")";
    return os.str();
  }

 private:
  explicit TameAbelianExtension(std::shared_ptr<const detail::ExtensionData> d) : data_(std::move(d)) {}

  static void check_degrees(std::uint32_t p, std::uint32_t t, std::uint32_t f, std::uint32_t e) {
    if (e % p == 0)
      throw WildRamification("e = " + std::to_string(e) + " is divisible by p = " + std::to_string(p) +
                             " (wild ramification is not supported)");
    if (std::uint64_t{e} * f > kMaxDegree) throw InvalidExtension("degree e*f exceeds 64");
    std::uint64_t q = 0;
    try {
      q = nt::checked_pow(p, t, FieldTower::kMaxOrder);
    } catch (const std::overflow_error&) {
      throw InvalidExtension("residue field larger than 2^20 elements");
    }
    if ((q - 1) % e != 0)
      throw InvalidExtension("e = " + std::to_string(e) + " does not divide q - 1 = " + std::to_string(q - 1) +
                             "; no tame abelian extension with this ramification index exists");
  }

  std::shared_ptr<const detail::ExtensionData> data_;
};

/// An element (a, c) of Gal(L/K): residues x -> x^{q^a}, alpha -> c*alpha.
class GaloisElement {
 public:
  GaloisElement(const TameAbelianExtension& ext, std::int64_t a, const FieldElement& c)
      : ext_(ext), a_(static_cast<std::uint32_t>(nt::mod(a, ext.f()))), c_(c) {
    if (!same_tower(c.tower(), ext.tower())) throw TowerMismatch();
    if (c.is_zero() || c.pow_u(ext.e()) != ext.u0().pow_u(nt::checked_pow(ext.q(), a_) - 1))
      throw InvariantViolation("(" + std::to_string(a_) + ", " + c.to_power_string() +
                               ") is not an automorphism: c^e != u0^{q^a - 1}");
  }

  const TameAbelianExtension& extension() const { return ext_; }
  std::uint32_t a() const { return a_; }
  const FieldElement& c() const { return c_; }
  bool is_identity() const { return a_ == 0 && c_.is_one(); }

  bool operator==(const GaloisElement& o) const { return a_ == o.a_ && c_ == o.c_ && ext_.same_field(o.ext_); }
  bool operator!=(const GaloisElement& o) const { return !(*this == o); }
  /// Orders by (a, log c).
  bool operator<(const GaloisElement& o) const {
    return a_ != o.a_ ? a_ < o.a_ : c_.log() < o.c_.log();
  }

  std::string to_string() const { return "(" + std::to_string(a_) + ", " + c_.to_power_string() + ")"; }

 private:
  TameAbelianExtension ext_;
  std::uint32_t a_;
  FieldElement c_;
};

inline bool is_automorphism_pair(const TameAbelianExtension& ext, std::int64_t a, const FieldElement& c) {
  const auto ar = static_cast<std::uint64_t>(nt::mod(a, ext.f()));
  return !c.is_zero() && c.pow_u(ext.e()) == ext.u0().pow_u(nt::checked_pow(ext.q(), ar) - 1);
}

inline GaloisElement identity(const TameAbelianExtension& ext) {
  return {ext, 0, FieldElement::one(ext.tower())};
}

/// g∘h = (a_g + a_h, frob(c_h, a_g) * c_g).
inline GaloisElement compose(const GaloisElement& g, const GaloisElement& h) {
  if (!g.extension().same_field(h.extension())) throw ExtensionMismatch();
  return {g.extension(), std::int64_t{g.a()} + h.a(), frobenius(h.c(), g.a()) * g.c()};
}

inline GaloisElement inverse(const GaloisElement& g) {
  const std::int64_t a = -std::int64_t{g.a()};
  return {g.extension(), a, frobenius(g.c().inv(), a)};
}

inline GaloisElement power(const GaloisElement& g, std::int64_t n) {
  GaloisElement base = n < 0 ? inverse(g) : g;
  std::uint64_t k = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  GaloisElement result = identity(g.extension());
  while (k > 0) {
    if (k & 1) result = compose(result, base);
    base = compose(base, base);
    k >>= 1;
  }
  return result;
}

inline std::uint64_t order(const GaloisElement& g) {
  GaloisElement x = g;
  for (std::uint64_t n = 1; n <= g.extension().degree(); ++n) {
    if (x.is_identity()) return n;
    x = compose(x, g);
  }
  throw InvariantViolation("element order exceeds group order");
}

/// All (a, c) with a in Z/f and c^e = u0^{q^a - 1}, sorted by (a, log c).
inline std::vector<GaloisElement> galois_group(const TameAbelianExtension& ext) {
  std::vector<GaloisElement> out;
  out.reserve(ext.degree());
  for (std::uint32_t a = 0; a < ext.f(); ++a) {
    const FieldElement target = ext.u0().pow_u(nt::checked_pow(ext.q(), a) - 1);
    for (const auto& c : solve_power(target, ext.e())) out.emplace_back(ext, a, c);
  }
  if (out.size() != ext.degree())
    throw InvariantViolation("galois_group: found " + std::to_string(out.size()) + " automorphisms, expected " +
                             std::to_string(ext.degree()));
  return out;
}

/// (1, c) with the smallest-log admissible c: lifts residue Frobenius.
inline GaloisElement frobenius_lift(const TameAbelianExtension& ext) {
  const FieldElement target = ext.u0().pow_u(ext.q() - 1);
  return {ext, 1, solve_power(target, ext.e()).front()};
}

/// (0, zeta_e) with zeta_e = g^{|l*|/e}; generates the inertia group.
inline GaloisElement inertia_generator(const TameAbelianExtension& ext) {
  return {ext, 0, FieldElement::from_log(ext.tower(), static_cast<std::int64_t>(ext.tower()->unit_order() / ext.e()))};
}

// ---------------------------------------------------------------------------
// Series in L and K

/// The uniformizer alpha of L.
inline LaurentSeries alpha(const TameAbelianExtension& ext) {
  return LaurentSeries::monomial(FieldElement::one(ext.tower()), kExtSymbol, 1, ext.precision());
}

/// The uniformizer t of K.
inline LaurentSeries base_uniformizer(const TameAbelianExtension& ext) {
  return LaurentSeries::monomial(FieldElement::one(ext.tower()), kBaseSymbol, 1, ext.precision());
}

/// The constant unit omega = generator of l*, as an element of L.
inline LaurentSeries residue_generator(const TameAbelianExtension& ext) {
  return LaurentSeries::constant(FieldElement::generator(ext.tower()), kExtSymbol, ext.precision());
}

/// K -> L via t = u0^{-1} alpha^e. Coefficients must lie in k.
inline LaurentSeries embed(const TameAbelianExtension& ext, const LaurentSeries& x) {
  if (x.symbol() != kBaseSymbol) throw SymbolMismatch(kBaseSymbol, x.symbol());
  if (!same_tower(x.tower(), ext.tower())) throw TowerMismatch();
  const std::uint32_t e = ext.e();
  if (x.is_zero()) return LaurentSeries::zero(ext.tower(), kExtSymbol, x.precision() * e);
  const auto& tw = *ext.tower();
  std::vector<Code> out(x.precision() * e, 0);
  for (std::size_t j = 0; j < x.precision(); ++j) {
    const Code k = x.codes()[j];
    if (k == 0) continue;
    if (!tw.in_base(k)) throw std::invalid_argument("embed: coefficient not in the base residue field");
    const std::int64_t m = x.valuation() + static_cast<std::int64_t>(j);
    out[j * e] = tw.mul(k, tw.pow_signed(ext.u0().code(), -m));
  }
  return {ext.tower(), kExtSymbol, x.valuation() * std::int64_t{e}, std::move(out), x.precision() * e};
}

/// L -> K when the series lies in K: alpha-exponents divisible by e and
/// re-expressed coefficients u0^m * coeff(alpha^{em}) in k.
inline std::optional<LaurentSeries> descend(const TameAbelianExtension& ext, const LaurentSeries& y) {
  if (y.symbol() != kExtSymbol) throw SymbolMismatch(kExtSymbol, y.symbol());
  const auto e = static_cast<std::int64_t>(ext.e());
  const auto& tw = *ext.tower();
  if (y.is_zero())
    return LaurentSeries::zero(ext.tower(), kBaseSymbol, std::max<std::size_t>(1, y.precision() / ext.e()));
  if (nt::mod(y.valuation(), e) != 0) return std::nullopt;
  const std::int64_t lo = y.valuation() / e;
  const std::int64_t hi = detail::floor_div(y.bound() - 1, e);  // last known t-exponent
  std::vector<Code> out(static_cast<std::size_t>(hi - lo + 1), 0);
  for (std::int64_t ex = y.valuation(); ex < y.bound(); ++ex) {
    const Code c = y.codes()[static_cast<std::size_t>(ex - y.valuation())];
    if (c == 0) continue;
    if (nt::mod(ex, e) != 0) return std::nullopt;
    const std::int64_t m = ex / e;
    const Code k = tw.mul(c, tw.pow_signed(ext.u0().code(), m));
    if (!tw.in_base(k)) return std::nullopt;
    out[static_cast<std::size_t>(m - lo)] = k;
  }
  const std::size_t n = out.size();
  return LaurentSeries(ext.tower(), kBaseSymbol, lo, std::move(out), n);
}

inline bool lies_in_base(const TameAbelianExtension& ext, const LaurentSeries& y) {
  return descend(ext, y).has_value();
}

/// g(beta): coefficients through frob^a, alpha^j scaled by c^j.
inline LaurentSeries apply(const GaloisElement& g, const LaurentSeries& beta) {
  const auto& ext = g.extension();
  if (beta.symbol() != kExtSymbol) throw SymbolMismatch(kExtSymbol, beta.symbol());
  if (!same_tower(beta.tower(), ext.tower())) throw TowerMismatch();
  const auto& tw = *ext.tower();
  const Code c = g.c().code();
  const std::int64_t a = g.a();
  return beta.map_terms(
      [&](std::int64_t j, Code b) { return b == 0 ? b : tw.mul(tw.frobenius(b, a), tw.pow_signed(c, j)); });
}

// ---------------------------------------------------------------------------
// Ramification filtration

/// G_i from the pair description: G_{-1} = G, G_0 = {a = 0}, G_i = {1}
/// for i >= 1 (tameness).
inline std::vector<GaloisElement> ramification_group(const TameAbelianExtension& ext, std::int64_t i) {
  if (i < -1) throw std::invalid_argument("ramification_group: index must be >= -1");
  std::vector<GaloisElement> out;
  for (const auto& g : galois_group(ext)) {
    if (i == -1 || (i == 0 && g.a() == 0) || (i >= 1 && g.is_identity())) out.push_back(g);
  }
  return out;
}

/// Integral elements used to audit the filtration: constants, alpha, products
/// and a few mixed sums.
inline std::vector<LaurentSeries> integral_samples(const TameAbelianExtension& ext) {
  const LaurentSeries a = alpha(ext);
  const LaurentSeries w = residue_generator(ext);
  const LaurentSeries one = LaurentSeries::constant(FieldElement::one(ext.tower()), kExtSymbol, ext.precision());
  return {w, a, w * a, one + a, w + a * a, w * w + w * a + a.pow(3), a.pow(2) * w};
}

/// G_i straight from the definition: v_L(g(z) - z) >= i + 1 for every sample z.
inline std::vector<GaloisElement> ramification_group_direct(const TameAbelianExtension& ext, std::int64_t i,
                                                            const std::vector<LaurentSeries>& samples) {
  if (i < -1) throw std::invalid_argument("ramification_group: index must be >= -1");
  std::vector<GaloisElement> out;
  for (const auto& g : galois_group(ext)) {
    bool member = true;
    for (const auto& z : samples) {
      if (z.valuation() < 0) throw std::invalid_argument("ramification samples must be integral");
      const LaurentSeries diff = apply(g, z) - z;
      if (!diff.is_zero() && diff.valuation() < i + 1) {
        member = false;
        break;
      }
    }
    if (member) out.push_back(g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Group structure

/// Invariant factors d_1 | d_2 | ... of Gal(L/K) (empty for the trivial group).
/// Generators: the Frobenius lift s = (1, c) and inertia z = (0, zeta_e) with
/// relations f*s = m*z and e*z = 0, where s^f = z^m.
inline std::vector<std::int64_t> structure(const TameAbelianExtension& ext) {
  const GaloisElement s = frobenius_lift(ext);
  const GaloisElement sf = power(s, ext.f());
  if (sf.a() != 0) throw InvariantViolation("structure: s^f is not in the inertia group");
  const std::uint64_t step = ext.tower()->unit_order() / ext.e();
  const std::uint64_t lg = sf.c().log();
  if (lg % step != 0) throw InvariantViolation("structure: s^f does not act by an e-th root of unity");
  const auto m = static_cast<std::int64_t>(lg / step);
  const IntMatrix<std::int64_t> rel{{static_cast<std::int64_t>(ext.f()), -m}, {0, static_cast<std::int64_t>(ext.e())}};
  auto factors = invariant_factors(rel, 2);
  std::int64_t prod = 1;
  for (const auto d : factors) prod *= d;
  if (prod != static_cast<std::int64_t>(ext.degree())) throw InvariantViolation("structure: order mismatch");
  return factors;
}

inline bool is_cyclic(const TameAbelianExtension& ext) { return structure(ext).size() <= 1; }

/// Generators of Gal(L/K) of full order, in group-enumeration order.
inline std::vector<GaloisElement> cyclic_generators(const TameAbelianExtension& ext) {
  std::vector<GaloisElement> out;
  for (const auto& g : galois_group(ext))
    if (order(g) == ext.degree()) out.push_back(g);
  return out;
}

}  // namespace locrec
