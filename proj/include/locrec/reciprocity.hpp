#pragma once

// The local reciprocity map theta: K*/N(L*) -> Gal(L/K) for tame abelian L/K.
//
// For b = u * pi^i and every beta in L*,
//
//   theta(b)(beta) / beta  =  beta^{q^i - 1}
//                             / ( ((-1)^{e-1} pi)^{(q^i - 1) v(beta)} * u^{(q - 1) v(beta)} )   mod pi_L
//
// with v the valuation of K extended to L (v(alpha) = 1/e). Evaluating the
// congruence at beta = omega (a generator of l*) pins a = i mod f; at
// beta = alpha it pins
//
//   c = (-1)^{(e-1)(q^i-1)/e} * u0^{(q^i-1)/e} * ubar^{-(q-1)/e}.
//
// theta_closed_form uses that formula; theta_search evaluates the right-hand
// side as series and scans the group, so the two are independent routes.

#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "locrec/errors.hpp"
#include "locrec/extension.hpp"
#include "locrec/ffield.hpp"
#include "locrec/series.hpp"
#include "locrec/smith.hpp"

namespace locrec {

/// The class of b = u * t^i in K*/U^1, i.e. (v_K(b), residue of the unit part).
struct BaseFieldClass {
  std::int64_t valuation = 0;
  FieldElement unit;

  bool operator==(const BaseFieldClass& o) const { return valuation == o.valuation && unit == o.unit; }
};

inline BaseFieldClass make_base_class(const TameAbelianExtension& ext, std::int64_t valuation,
                                      const FieldElement& unit) {
  if (!same_tower(unit.tower(), ext.tower())) throw TowerMismatch();
  if (unit.is_zero()) throw std::invalid_argument("base class unit must be nonzero");
  if (!in_base_field(unit)) throw std::invalid_argument("base class unit " + unit.to_string() + " is not in k");
  return {valuation, unit};
}

inline BaseFieldClass multiply(const BaseFieldClass& x, const BaseFieldClass& y) {
  return {x.valuation + y.valuation, x.unit * y.unit};
}

inline BaseFieldClass inverse(const BaseFieldClass& x) { return {-x.valuation, x.unit.inv()}; }

/// ubar * t^i as a series in K.
inline LaurentSeries to_series(const TameAbelianExtension& ext, const BaseFieldClass& b) {
  return LaurentSeries::monomial(b.unit, kBaseSymbol, b.valuation, ext.precision());
}

/// Generator eta = g^{(q^f-1)/(q-1)} of k*.
inline FieldElement base_generator(const TameAbelianExtension& ext) {
  return FieldElement::from_log(ext.tower(), static_cast<std::int64_t>(ext.tower()->unit_order() / (ext.q() - 1)));
}

/// Discrete log of x in k* to base_generator(ext), in [0, q-1).
inline std::int64_t base_log(const TameAbelianExtension& ext, const FieldElement& x) {
  if (!in_base_field(x)) throw std::invalid_argument("base_log: element not in k");
  return static_cast<std::int64_t>(x.log() / (ext.tower()->unit_order() / (ext.q() - 1)));
}

/// A uniformly random element of k (nonzero if requested).
template <class Rng>
FieldElement random_base_element(const TameAbelianExtension& ext, Rng& rng, bool nonzero) {
  std::uniform_int_distribution<std::int64_t> dist(nonzero ? 1 : 0, static_cast<std::int64_t>(ext.q()) - 1);
  const std::int64_t r = dist(rng);
  if (r == 0) return FieldElement::zero(ext.tower());
  return base_generator(ext).pow(r - 1);
}

/// A random series in t with coefficients in k and the given valuation.
template <class Rng>
LaurentSeries random_base_series(const TameAbelianExtension& ext, std::int64_t valuation, std::size_t precision,
                                 Rng& rng) {
  std::vector<FieldElement> c;
  c.reserve(precision);
  c.push_back(random_base_element(ext, rng, true));
  for (std::size_t i = 1; i < precision; ++i) c.push_back(random_base_element(ext, rng, false));
  return LaurentSeries::from_elements(ext.tower(), kBaseSymbol, valuation, c, precision);
}

namespace detail {

/// (q^i - 1)/e reduced mod |l*|, for i >= 0.
inline std::uint64_t qi_minus_one_over_e(const TameAbelianExtension& ext, std::uint64_t i) {
  const std::uint64_t m = std::uint64_t{ext.e()} * ext.tower()->unit_order();
  const std::uint64_t x = (nt::powmod(ext.q(), i, m) + m - 1) % m;
  return x / ext.e();
}

/// (-1)^{(e-1)(q^i-1)/e} as an element of k.
inline FieldElement reciprocity_sign(const TameAbelianExtension& ext, std::uint64_t i) {
  const auto one = FieldElement::one(ext.tower());
  if (ext.p() == 2 || ext.e() % 2 == 1) return one;
  const std::uint64_t two_e = 2 * std::uint64_t{ext.e()};
  const std::uint64_t parity = ((nt::powmod(ext.q(), i, two_e) + two_e - 1) % two_e) / ext.e();
  return parity ? -one : one;
}

}  // namespace detail

/// theta(u * t^i) from the closed form. Negative i goes through the group
/// inverse: theta(b) = theta(b^{-1})^{-1}.
inline GaloisElement theta_closed_form(const TameAbelianExtension& ext, const BaseFieldClass& b) {
  const BaseFieldClass bb = make_base_class(ext, b.valuation, b.unit);
  if (bb.valuation < 0) return inverse(theta_closed_form(ext, inverse(bb)));
  const auto i = static_cast<std::uint64_t>(bb.valuation);
  const FieldElement c = detail::reciprocity_sign(ext, i) * ext.u0().pow_u(detail::qi_minus_one_over_e(ext, i)) *
                         bb.unit.pow(-static_cast<std::int64_t>((ext.q() - 1) / ext.e()));
  return {ext, static_cast<std::int64_t>(i % ext.f()), c};
}

/// Right-hand side of the reciprocity congruence for b = u' * pi'^i, evaluated
/// as an exact quotient of series in L and reduced mod alpha.
inline FieldElement rhs_value(const TameAbelianExtension& ext, const LaurentSeries& pi_prime,
                              const LaurentSeries& u_prime, std::int64_t i, const LaurentSeries& beta) {
  if (pi_prime.is_zero() || pi_prime.valuation() != 1)
    throw std::invalid_argument("rhs_value: pi' is not a uniformizer of K");
  if (u_prime.is_zero() || u_prime.valuation() != 0) throw std::invalid_argument("rhs_value: u' is not a unit of K");
  if (beta.is_zero()) throw DivisionByZero();
  if (i < 0) throw std::invalid_argument("rhs_value: i must be non-negative");
  const auto e = static_cast<std::int64_t>(ext.e());
  const std::size_t prec = ext.precision();
  const std::uint64_t qi = nt::checked_pow(ext.q(), static_cast<std::uint64_t>(i), std::uint64_t{1} << 62);
  const std::int64_t m = beta.valuation();  // e * v_K(beta)
  const auto exp_pi = static_cast<std::int64_t>((qi - 1) / static_cast<std::uint64_t>(e)) * m;
  const auto exp_u = static_cast<std::int64_t>((ext.q() - 1) / static_cast<std::uint64_t>(e)) * m;

  const FieldElement sign = FieldElement::from_int(ext.tower(), (e - 1) % 2 == 0 ? 1 : -1);
  const LaurentSeries signed_pi = embed(ext, pi_prime).truncated(prec).scaled(sign);
  const LaurentSeries u_l = embed(ext, u_prime).truncated(prec);
  const LaurentSeries num = beta.truncated(prec).pow_u(qi - 1);
  const LaurentSeries den = signed_pi.pow(exp_pi) * u_l.pow(exp_u);
  const LaurentSeries quotient = num / den;
  if (quotient.is_zero() || quotient.valuation() != 0)
    throw InvariantViolation("rhs_value: quotient is not a unit");
  return reduce_residue(quotient);
}

/// theta(u' * pi'^i) found by scanning Gal(L/K) for the unique g whose
/// residues g(alpha)/alpha and g(omega)/omega match the right-hand side.
inline GaloisElement theta_search(const TameAbelianExtension& ext, const LaurentSeries& pi_prime,
                                  const LaurentSeries& u_prime, std::int64_t i) {
  if (i < 0) return inverse(theta_search(ext, pi_prime, u_prime.inverse(), -i));
  const LaurentSeries a = alpha(ext);
  const LaurentSeries w = residue_generator(ext);
  const FieldElement target_alpha = rhs_value(ext, pi_prime, u_prime, i, a);
  const FieldElement target_omega = rhs_value(ext, pi_prime, u_prime, i, w);
  std::vector<GaloisElement> matches;
  for (const auto& g : galois_group(ext)) {
    if (reduce_residue(apply(g, a) / a) == target_alpha && reduce_residue(apply(g, w) / w) == target_omega)
      matches.push_back(g);
  }
  if (matches.size() != 1)
    throw InvariantViolation("theta_search: " + std::to_string(matches.size()) + " matching automorphisms for i=" +
                             std::to_string(i));
  return matches.front();
}

/// theta_search with pi' = t and u' the constant ubar.
inline GaloisElement theta_search(const TameAbelianExtension& ext, const BaseFieldClass& b) {
  return theta_search(ext, base_uniformizer(ext), LaurentSeries::constant(b.unit, kBaseSymbol, ext.precision()),
                      b.valuation);
}

/// N_{L/K}(beta) = prod_g g(beta), returned as a series in t.
inline LaurentSeries norm(const TameAbelianExtension& ext, const LaurentSeries& beta) {
  if (beta.is_zero()) throw DivisionByZero();
  LaurentSeries prod = LaurentSeries::constant(FieldElement::one(ext.tower()), kExtSymbol, beta.precision());
  for (const auto& g : galois_group(ext)) prod = prod * apply(g, beta);
  auto down = descend(ext, prod);
  if (!down) throw InvariantViolation("norm: product of conjugates does not lie in K");
  return *down;
}

/// theta of an arbitrary b in K*: the one-unit part is a norm and drops out.
inline GaloisElement theta_full(const TameAbelianExtension& ext, const LaurentSeries& b) {
  if (b.is_zero()) throw DivisionByZero();
  if (b.symbol() != kBaseSymbol) throw SymbolMismatch(kBaseSymbol, b.symbol());
  return theta_closed_form(ext, make_base_class(ext, b.valuation(), b.leading_coefficient()));
}

// ---------------------------------------------------------------------------
// Norm group

/// K*/N(L*) presented inside Z (+) Z/(q-1), the second coordinate being the
/// discrete log of the residue to base_generator(ext).
struct NormGroupPresentation {
  std::int64_t unit_modulus = 1;                    // q - 1
  IntMatrix<std::int64_t> relations;                // image generators and (0, q-1)
  std::vector<std::int64_t> invariant_factors;      // of the quotient
  std::vector<BaseFieldClass> coset_representatives;
  std::int64_t valuation_step = 1;                  // v_K(N(alpha)) = f
  std::int64_t alpha_norm_log = 0;                  // residue log of N(alpha)
  std::int64_t unit_index = 1;                      // [k* : residues of unit norms]
  FieldElement eta;                                 // generator of k*

  std::int64_t order() const {
    return std::accumulate(invariant_factors.begin(), invariant_factors.end(), std::int64_t{1},
                           std::multiplies<>());
  }
};

inline NormGroupPresentation norm_group(const TameAbelianExtension& ext) {
  NormGroupPresentation out;
  out.unit_modulus = static_cast<std::int64_t>(ext.q() - 1);
  out.eta = base_generator(ext);
  const LaurentSeries n_alpha = norm(ext, alpha(ext));
  const LaurentSeries n_omega = norm(ext, residue_generator(ext));
  if (n_omega.valuation() != 0) throw InvariantViolation("norm_group: norm of a unit is not a unit");
  out.valuation_step = n_alpha.valuation();
  out.alpha_norm_log = base_log(ext, n_alpha.leading_coefficient());
  const std::int64_t omega_log = base_log(ext, n_omega.leading_coefficient());
  out.relations = {{out.valuation_step, out.alpha_norm_log}, {0, omega_log}, {0, out.unit_modulus}};
  out.invariant_factors = invariant_factors(out.relations, 2);
  out.unit_index = std::gcd(omega_log, out.unit_modulus);
  for (std::int64_t i = 0; i < out.valuation_step; ++i)
    for (std::int64_t l = 0; l < out.unit_index; ++l) out.coset_representatives.push_back({i, out.eta.pow(l)});
  const auto n = static_cast<std::int64_t>(ext.degree());
  if (out.order() != n || static_cast<std::int64_t>(out.coset_representatives.size()) != n)
    throw InvariantViolation("norm_group: |K*/N(L*)| = " + std::to_string(out.order()) + ", expected e*f = " +
                             std::to_string(n));
  return out;
}

/// The coset representative of b's class.
inline BaseFieldClass reduce_class(const TameAbelianExtension& ext, const NormGroupPresentation& ng,
                                   const BaseFieldClass& b) {
  const std::int64_t i = nt::mod(b.valuation, ng.valuation_step);
  const std::int64_t k = (b.valuation - i) / ng.valuation_step;
  const std::int64_t l = nt::mod(base_log(ext, b.unit) - k * ng.alpha_norm_log, ng.unit_index);
  return {i, ng.eta.pow(l)};
}

inline bool is_norm(const TameAbelianExtension& ext, const NormGroupPresentation& ng, const BaseFieldClass& b) {
  const BaseFieldClass r = reduce_class(ext, ng, b);
  return r.valuation == 0 && r.unit.is_one();
}

inline bool is_norm(const TameAbelianExtension& ext, const BaseFieldClass& b) {
  return is_norm(ext, norm_group(ext), b);
}

/// Totally ramified criterion: a unit u is a norm iff u^{(q-1)/e} = 1.
inline bool is_norm_unit_criterion(const TameAbelianExtension& ext, const FieldElement& ubar) {
  return ubar.pow_u((ext.q() - 1) / ext.e()).is_one();
}

// ---------------------------------------------------------------------------
// Norm congruences

struct NormCongruenceReport {
  std::size_t units_checked = 0;
  std::size_t uniformizers_checked = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Checks, on random samples,
///   N(u) = N_{l/k}(ubar)^e mod pi              for units u of L, and
///   N(pi_L) / ((-1)^{e-1} t)^f = N_{l/k}(ubar)   for pi_L = w*alpha, pi_L^e = t*u.
template <class Rng>
NormCongruenceReport verify_norm_congruences(const TameAbelianExtension& ext, std::size_t unit_samples,
                                             std::size_t uniformizer_samples, Rng& rng) {
  NormCongruenceReport rep;
  const auto& tw = ext.tower();
  for (std::size_t s = 0; s < unit_samples; ++s) {
    const LaurentSeries u = random_series(tw, kExtSymbol, 0, ext.precision(), rng);
    const FieldElement lhs = reduce_residue(norm(ext, u));
    const FieldElement rhs = norm_residue(reduce_residue(u)).pow_u(ext.e());
    ++rep.units_checked;
    if (lhs != rhs) rep.failures.push_back("unit " + u.to_string() + ": N(u) = " + lhs.to_string() + ", expected " +
                                           rhs.to_string());
  }
  const FieldElement sign = FieldElement::from_int(tw, ext.e() % 2 == 1 ? 1 : -1);
  const LaurentSeries t = base_uniformizer(ext);
  for (std::size_t s = 0; s < uniformizer_samples; ++s) {
    const LaurentSeries w = random_series(tw, kExtSymbol, 0, ext.precision(), rng);
    const LaurentSeries pi_l = w * alpha(ext);
    const FieldElement ubar = reduce_residue(pi_l.pow(ext.e()) / embed(ext, t));
    const LaurentSeries ratio = norm(ext, pi_l) / t.scaled(sign).pow(ext.f());
    const FieldElement lhs = reduce_residue(ratio);
    const FieldElement rhs = norm_residue(ubar);
    ++rep.uniformizers_checked;
    if (lhs != rhs)
      rep.failures.push_back("uniformizer " + pi_l.to_string() + ": ratio " + lhs.to_string() + ", expected " +
                             rhs.to_string());
  }
  return rep;
}

}  // namespace locrec
