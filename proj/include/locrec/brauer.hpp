#pragma once

// Characters of Gal(L/K), Hasse invariants inv(chi, b) = chi(theta(b)), and a
// brute-force model of the cyclic algebra (chi, b) as a crossed product.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "locrec/errors.hpp"
#include "locrec/extension.hpp"
#include "locrec/reciprocity.hpp"

namespace locrec {

/// An element of Q/Z, kept as num/den with 0 <= num < den and gcd(num, den) = 1.
class QZ {
 public:
  QZ() = default;
  QZ(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw std::invalid_argument("QZ: denominator must be positive");
    num = nt::mod(num, den);
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  /// Order in Q/Z.
  std::int64_t order() const { return den_; }

  QZ operator+(const QZ& o) const { return {num_ * o.den_ + o.num_ * den_, den_ * o.den_}; }
  QZ operator-() const { return {-num_, den_}; }
  QZ operator-(const QZ& o) const { return *this + (-o); }
  QZ operator*(std::int64_t k) const { return {nt::mod(num_ * nt::mod(k, den_), den_), den_}; }
  bool operator==(const QZ& o) const { return num_ == o.num_ && den_ == o.den_; }

  std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// A homomorphism Gal(L/K) -> Q/Z stored as a full value table, so that
/// non-cyclic groups need no special treatment.
class Character {
 public:
  /// elements must be galois_group(ext) (sorted); values are aligned with it.
  Character(TameAbelianExtension ext, std::vector<GaloisElement> elements, std::vector<QZ> values)
      : ext_(std::move(ext)), elements_(std::move(elements)), values_(std::move(values)) {
    if (elements_.size() != values_.size() || elements_.size() != ext_.degree())
      throw std::invalid_argument("Character: table size must equal the group order");
  }

  const TameAbelianExtension& extension() const { return ext_; }
  const std::vector<GaloisElement>& elements() const { return elements_; }
  const std::vector<QZ>& values() const { return values_; }

  QZ operator()(const GaloisElement& g) const {
    if (!g.extension().same_field(ext_)) throw ExtensionMismatch();
    const auto it = std::lower_bound(elements_.begin(), elements_.end(), g);
    if (it == elements_.end() || *it != g) throw std::invalid_argument("Character: element not in table");
    return values_[static_cast<std::size_t>(it - elements_.begin())];
  }

  Character operator+(const Character& o) const {
    if (!o.ext_.same_field(ext_)) throw ExtensionMismatch();
    std::vector<QZ> v(values_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = values_[k] + o.values_[k];
    return {ext_, elements_, std::move(v)};
  }

  bool is_trivial() const {
    return std::all_of(values_.begin(), values_.end(), [](const QZ& x) { return x.is_zero(); });
  }
  /// Injective on the group.
  bool is_faithful() const {
    std::size_t zeros = 0;
    for (const auto& x : values_) zeros += x.is_zero() ? 1 : 0;
    return zeros == 1;
  }
  /// chi(gh) = chi(g) + chi(h), exhaustively.
  bool is_homomorphism() const {
    for (const auto& g : elements_)
      for (const auto& h : elements_)
        if ((*this)(compose(g, h)) != (*this)(g) + (*this)(h)) return false;
    return true;
  }

  bool operator==(const Character& o) const { return ext_.same_field(o.ext_) && values_ == o.values_; }

 private:
  TameAbelianExtension ext_;
  std::vector<GaloisElement> elements_;
  std::vector<QZ> values_;
};

/// chi(sigma^j) = j*k/n for a generator sigma of the (cyclic) group of order n.
inline Character character_from_generator(const TameAbelianExtension& ext, const GaloisElement& sigma,
                                          std::int64_t k) {
  const auto n = static_cast<std::int64_t>(ext.degree());
  if (!sigma.extension().same_field(ext)) throw ExtensionMismatch();
  if (order(sigma) != ext.degree())
    throw std::invalid_argument("character_from_generator: " + sigma.to_string() + " does not generate Gal(L/K)");
  auto elements = galois_group(ext);
  std::vector<QZ> values(elements.size());
  GaloisElement g = identity(ext);
  for (std::int64_t j = 0; j < n; ++j, g = compose(sigma, g)) {
    const auto it = std::lower_bound(elements.begin(), elements.end(), g);
    values[static_cast<std::size_t>(it - elements.begin())] = QZ(j * k, n);
  }
  return {ext, std::move(elements), std::move(values)};
}

namespace detail {

/// m with s^f = zeta^m, where s = frobenius_lift and zeta = inertia_generator.
inline std::int64_t frobenius_relation(const TameAbelianExtension& ext) {
  const GaloisElement sf = power(frobenius_lift(ext), ext.f());
  const std::uint64_t step = ext.tower()->unit_order() / ext.e();
  if (sf.a() != 0 || sf.c().log() % step != 0) throw InvariantViolation("s^f is not an inertia element");
  return static_cast<std::int64_t>(sf.c().log() / step);
}

}  // namespace detail

/// Every character of Gal(L/K), in a fixed order (the trivial one first).
/// Each is determined by x = ef*chi(s) and y = e*chi(zeta) subject to the
/// relation f*chi(s) = m*chi(zeta), i.e. x = m*y mod e.
inline std::vector<Character> all_characters(const TameAbelianExtension& ext) {
  const auto e = static_cast<std::int64_t>(ext.e());
  const auto f = static_cast<std::int64_t>(ext.f());
  const auto n = e * f;
  const std::int64_t m = detail::frobenius_relation(ext);
  const GaloisElement s = frobenius_lift(ext);
  const GaloisElement z = inertia_generator(ext);
  const auto elements = galois_group(ext);

  // Coordinates (a, b) of each element as s^a z^b, a in [0, f), b in [0, e).
  std::vector<std::pair<std::int64_t, std::int64_t>> coords(elements.size(), {-1, -1});
  GaloisElement sa = identity(ext);
  for (std::int64_t a = 0; a < f; ++a, sa = compose(s, sa)) {
    GaloisElement g = sa;
    for (std::int64_t b = 0; b < e; ++b, g = compose(z, g)) {
      const auto it = std::lower_bound(elements.begin(), elements.end(), g);
      coords[static_cast<std::size_t>(it - elements.begin())] = {a, b};
    }
  }
  for (const auto& c : coords)
    if (c.first < 0) throw InvariantViolation("all_characters: s and zeta do not generate the group");

  std::vector<Character> out;
  for (std::int64_t x = 0; x < n; ++x)
    for (std::int64_t y = 0; y < e; ++y) {
      if (nt::mod(x - m * y, e) != 0) continue;
      std::vector<QZ> values;
      values.reserve(elements.size());
      for (const auto& [a, b] : coords) values.push_back(QZ(a * x, n) + QZ(b * y, e));
      out.emplace_back(ext, elements, std::move(values));
    }
  if (out.size() != static_cast<std::size_t>(n)) throw InvariantViolation("all_characters: wrong count");
  return out;
}

/// inv(chi, b) = chi(theta(b)).
inline QZ hasse_invariant(const Character& chi, const BaseFieldClass& b) {
  return chi(theta_closed_form(chi.extension(), b));
}

// ---------------------------------------------------------------------------
// Cyclic algebras

struct CyclicAlgebraSpec {
  TameAbelianExtension ext;
  GaloisElement sigma;
  BaseFieldClass b;
};

inline CyclicAlgebraSpec make_cyclic_algebra_spec(const TameAbelianExtension& ext, const GaloisElement& sigma,
                                                  const BaseFieldClass& b) {
  if (!sigma.extension().same_field(ext)) throw ExtensionMismatch();
  if (order(sigma) != ext.degree())
    throw std::invalid_argument("cyclic algebra: " + sigma.to_string() + " does not have order e*f");
  return {ext, sigma, make_base_class(ext, b.valuation, b.unit)};
}

/// Order of b in K*/N(L*), from norm-group membership of its powers.
inline std::uint64_t quotient_order(const TameAbelianExtension& ext, const NormGroupPresentation& ng,
                                    const BaseFieldClass& b) {
  BaseFieldClass x = b;
  for (std::uint64_t k = 1; k <= ext.degree(); ++k, x = multiply(x, b))
    if (is_norm(ext, ng, x)) return k;
  throw InvariantViolation("quotient_order: class order exceeds e*f");
}

/// A class generating K*/N(L*) when the quotient is cyclic: t itself if it
/// generates, otherwise the first coset representative that does.
inline std::optional<BaseFieldClass> quotient_generator(const TameAbelianExtension& ext) {
  const auto ng = norm_group(ext);
  const BaseFieldClass t{1, FieldElement::one(ext.tower())};
  if (quotient_order(ext, ng, t) == ext.degree()) return t;
  for (const auto& r : ng.coset_representatives)
    if (quotient_order(ext, ng, r) == ext.degree()) return r;
  return std::nullopt;
}

/// The exponent r with sigma^r = theta(b), found without the closed form:
/// sigma^r is matched against the reciprocity congruence at alpha and omega.
/// For b = t this is the congruence sigma^r(alpha)/alpha = ((-1)^{e-1} u0)^{(q-1)/e}
/// together with a = 1. b must generate K*/N(L*), which makes r a unit mod e*f.
inline std::int64_t frobenius_exponent(const CyclicAlgebraSpec& spec) {
  const auto& ext = spec.ext;
  BaseFieldClass b = spec.b;
  bool invert = false;
  if (b.valuation < 0) {
    b = inverse(b);
    invert = true;
  }
  const LaurentSeries t = base_uniformizer(ext);
  const LaurentSeries u = LaurentSeries::constant(b.unit, kBaseSymbol, ext.precision());
  const LaurentSeries a = alpha(ext);
  const LaurentSeries w = residue_generator(ext);
  const FieldElement target_alpha = rhs_value(ext, t, u, b.valuation, a);
  const FieldElement target_omega = rhs_value(ext, t, u, b.valuation, w);

  const auto n = static_cast<std::int64_t>(ext.degree());
  std::optional<std::int64_t> found;
  GaloisElement g = identity(ext);
  for (std::int64_t r = 0; r < n; ++r, g = compose(spec.sigma, g)) {
    if (reduce_residue(apply(g, a) / a) == target_alpha && reduce_residue(apply(g, w) / w) == target_omega) {
      if (found) throw InvariantViolation("frobenius_exponent: several exponents match");
      found = r;
    }
  }
  if (!found) throw InvariantViolation("frobenius_exponent: no power of sigma satisfies the congruence");
  const std::int64_t r = invert ? nt::mod(-*found, n) : *found;
  if (std::gcd(r, n) != 1)
    throw std::domain_error("frobenius_exponent: r = " + std::to_string(r) +
                            " is not a unit mod e*f, so b does not generate K*/N(L*)");
  return r;
}

/// An element sum_{i<n} x_i v^i of the crossed product, x_i in L.
using CrossedElement = std::vector<LaurentSeries>;

/// The crossed product (+)_{i<n} L v^i with v a = sigma(a) v and v^n = b.
class CrossedProduct {
 public:
  explicit CrossedProduct(const CyclicAlgebraSpec& spec)
      : spec_(spec),
        n_(static_cast<std::size_t>(spec.ext.degree())),
        b_l_(embed(spec.ext, to_series(spec.ext, spec.b)).truncated(spec.ext.precision())) {
    GaloisElement g = identity(spec.ext);
    for (std::size_t i = 0; i < n_; ++i, g = compose(spec.sigma, g)) sigma_pow_.push_back(g);
  }

  std::size_t dimension() const { return n_; }
  const LaurentSeries& b_in_l() const { return b_l_; }

  CrossedElement zero() const {
    return CrossedElement(n_, LaurentSeries::zero(spec_.ext.tower(), kExtSymbol, spec_.ext.precision()));
  }
  /// a * v^i.
  CrossedElement monomial(const LaurentSeries& a, std::size_t i) const {
    auto x = zero();
    x.at(i) = a;
    return x;
  }
  /// The generator v (equal to b when n = 1).
  CrossedElement v() const { return n_ > 1 ? monomial(one_l(), 1) : monomial(b_l_, 0); }
  /// v^n = b as an algebra element.
  CrossedElement v_power_n() const { return monomial(b_l_, 0); }

  CrossedElement add(const CrossedElement& x, const CrossedElement& y) const {
    CrossedElement out(n_, x[0]);
    for (std::size_t i = 0; i < n_; ++i) out[i] = x[i] + y[i];
    return out;
  }

  /// (a v^i)(c v^j) = a sigma^i(c) v^{i+j}, folding v^n = b.
  CrossedElement mul(const CrossedElement& x, const CrossedElement& y) const {
    auto out = zero();
    for (std::size_t i = 0; i < n_; ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (y[j].is_zero()) continue;
        LaurentSeries term = x[i] * apply(sigma_pow_[i], y[j]);
        std::size_t k = i + j;
        if (k >= n_) {
          term = term * b_l_;
          k -= n_;
        }
        out[k] = out[k] + term;
      }
    }
    return out;
  }

  bool equal(const CrossedElement& x, const CrossedElement& y) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (!x[i].agrees_with(y[i])) return false;
    return true;
  }

  bool commutes(const CrossedElement& x, const CrossedElement& y) const { return equal(mul(x, y), mul(y, x)); }

  template <class Rng>
  CrossedElement random(Rng& rng) const {
    std::uniform_int_distribution<int> val(0, 2);
    std::uniform_int_distribution<int> skip(0, 7);
    auto x = zero();
    for (auto& c : x) {
      if (skip(rng) == 0) continue;
      c = random_series(spec_.ext.tower(), kExtSymbol, val(rng), spec_.ext.precision(), rng);
    }
    return x;
  }

 private:
  LaurentSeries one_l() const {
    return LaurentSeries::constant(FieldElement::one(spec_.ext.tower()), kExtSymbol, spec_.ext.precision());
  }

  CyclicAlgebraSpec spec_;
  std::size_t n_;
  LaurentSeries b_l_;
  std::vector<GaloisElement> sigma_pow_;
};

struct CyclicAlgebraReport {
  std::size_t triples_checked = 0;
  std::size_t center_samples = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Checks associativity, v a = sigma(a) v, centrality of v^n, and that an
/// element of L commutes with v exactly when it lies in K.
template <class Rng>
CyclicAlgebraReport cyclic_algebra_check(const CyclicAlgebraSpec& spec, std::size_t samples, Rng& rng) {
  if (spec.ext.precision() < 8) throw std::invalid_argument("cyclic_algebra_check: precision must be at least 8");
  CyclicAlgebraReport rep;
  const CrossedProduct alg(spec);
  const auto& ext = spec.ext;
  const std::size_t n = alg.dimension();
  const CrossedElement v = alg.v();
  const CrossedElement vn = alg.v_power_n();

  for (std::size_t s = 0; s < samples; ++s) {
    const auto x = alg.random(rng);
    const auto y = alg.random(rng);
    const auto z = alg.random(rng);
    ++rep.triples_checked;
    if (!alg.equal(alg.mul(alg.mul(x, y), z), alg.mul(x, alg.mul(y, z))))
      rep.failures.push_back("associativity fails on sample " + std::to_string(s));
    if (!alg.commutes(vn, x)) rep.failures.push_back("v^n is not central on sample " + std::to_string(s));

    const LaurentSeries a = random_series(ext.tower(), kExtSymbol, 0, ext.precision(), rng);
    if (n > 1) {
      const auto lhs = alg.mul(v, alg.monomial(a, 0));
      const auto rhs = alg.mul(alg.monomial(apply(spec.sigma, a), 0), v);
      if (!alg.equal(lhs, rhs)) rep.failures.push_back("v a != sigma(a) v for a = " + a.to_string());
    }

    // Half the center probes come from K, half are generic elements of L.
    const LaurentSeries probe =
        s % 2 == 0 ? embed(ext, random_base_series(ext, 0, ext.precision(), rng)).truncated(ext.precision())
                   : a;
    ++rep.center_samples;
    if (alg.commutes(alg.monomial(probe, 0), v) != lies_in_base(ext, probe))
      rep.failures.push_back("center test disagrees with K-membership for " + probe.to_string());
  }
  return rep;
}

}  // namespace locrec
