#pragma once

// The property suite behind `locrec check`: every invariant of the group,
// reciprocity and Brauer layers evaluated on one extension, deterministically
// from a seed.

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "locrec/brauer.hpp"
#include "locrec/descriptor.hpp"
#include "locrec/extension.hpp"
#include "locrec/reciprocity.hpp"

namespace locrec {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t kernel_samples = 200;
  std::size_t unit_samples = 100;
  std::size_t uniformizer_samples = 10;
  std::size_t independence_samples = 10;
  std::size_t algebra_samples = 100;
  std::size_t algebra_precision = 8;
  std::size_t root_samples = 100;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string detail;  // first failure, if any
};

struct SuiteReport {
  std::string descriptor;
  std::uint64_t seed = 0;
  std::size_t group_order = 0;
  std::vector<std::int64_t> structure;
  std::size_t oracle_matches = 0;
  std::size_t oracle_total = 0;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  std::string agreement() const { return std::to_string(oracle_matches) + "/" + std::to_string(oracle_total); }
};

namespace detail {

/// Collects case counts and the first failure message for one check.
class CheckScope {
 public:
  explicit CheckScope(std::string name) { result_.name = std::move(name); }

  void expect(bool ok, const std::function<std::string()>& what) {
    ++result_.cases;
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.detail = what();
    }
  }
  /// Cases counted by a sub-check that reports failures separately.
  void add_cases(std::size_t n, const std::vector<std::string>& failures) {
    result_.cases += n;
    if (!failures.empty()) fail(failures.front());
  }
  void fail(const std::string& what) {
    if (result_.passed) result_.detail = what;
    result_.passed = false;
  }
  CheckResult take() { return std::move(result_); }

 private:
  CheckResult result_;
};

template <class Fn>
CheckResult run_check(const std::string& name, Fn body) {
  CheckScope scope(name);
  try {
    body(scope);
  } catch (const std::exception& ex) {
    scope.fail(std::string("exception: ") + ex.what());
  }
  return scope.take();
}

}  // namespace detail

inline SuiteReport run_property_suite(const TameAbelianExtension& ext, const SuiteOptions& opt = {}) {
  using detail::CheckScope;
  using detail::run_check;
  SuiteReport rep;
  rep.descriptor = emit_descriptor(descriptor_of(ext, opt.seed));
  rep.seed = opt.seed;
  rep.group_order = ext.degree();
  std::mt19937_64 rng(opt.seed);
  const auto one = FieldElement::one(ext.tower());
  const auto n = static_cast<std::int64_t>(ext.degree());

  std::vector<GaloisElement> group;
  rep.checks.push_back(run_check("galois.axioms", [&](CheckScope& s) {
    group = galois_group(ext);
    s.expect(group.size() == ext.degree(), [&] { return "group has " + std::to_string(group.size()) + " elements"; });
    const std::set<GaloisElement> members(group.begin(), group.end());
    for (const auto& g : group) {
      s.expect(is_automorphism_pair(ext, g.a(), g.c()), [&] { return g.to_string() + " fails c^e = u0^(q^a-1)"; });
      s.expect(compose(g, inverse(g)).is_identity(), [&] { return "inverse of " + g.to_string(); });
      s.expect(compose(identity(ext), g) == g, [&] { return "identity on " + g.to_string(); });
      for (const auto& h : group) {
        const auto gh = compose(g, h);
        s.expect(gh == compose(h, g), [&] { return g.to_string() + " and " + h.to_string() + " do not commute"; });
        s.expect(members.count(gh) == 1, [&] { return "not closed at " + g.to_string() + "*" + h.to_string(); });
      }
    }
  }));

  rep.checks.push_back(run_check("galois.action", [&](CheckScope& s) {
    const std::size_t prec = std::min<std::size_t>(ext.precision(), 12);
    for (const auto& g : group) {
      const auto x = random_series(ext.tower(), kExtSymbol, 0, prec, rng);
      const auto y = random_series(ext.tower(), kExtSymbol, 1, prec, rng);
      s.expect(apply(g, x * y).agrees_with(apply(g, x) * apply(g, y)), [&] { return "not multiplicative: " + g.to_string(); });
      s.expect(apply(g, x + y).agrees_with(apply(g, x) + apply(g, y)), [&] { return "not additive: " + g.to_string(); });
      const auto k = embed(ext, random_base_series(ext, -1, prec, rng));
      s.expect(apply(g, k) == k, [&] { return g.to_string() + " moves an element of K"; });
    }
  }));

  rep.checks.push_back(run_check("galois.ramification", [&](CheckScope& s) {
    s.expect(ramification_group(ext, 0).size() == ext.e(), [] { return "|G_0| != e"; });
    s.expect(ramification_group(ext, 1).size() == 1, [] { return "G_1 is not trivial"; });
    const auto samples = integral_samples(ext);
    for (std::int64_t i = -1; i <= 2; ++i)
      s.expect(ramification_group_direct(ext, i, samples) == ramification_group(ext, i),
               [&] { return "closed form and definition differ at i = " + std::to_string(i); });
    std::set<Code> cs;
    for (const auto& g : ramification_group(ext, 0)) cs.insert(g.c().code());
    s.expect(cs.size() == ext.e(), [] { return "g -> g(alpha)/alpha is not injective on G_0"; });
  }));

  rep.checks.push_back(run_check("galois.structure", [&](CheckScope& s) {
    rep.structure = structure(ext);
    std::int64_t prod = 1;
    for (auto d : rep.structure) prod *= d;
    s.expect(prod == n, [] { return "product of invariant factors != e*f"; });
  }));

  NormGroupPresentation ng;
  rep.checks.push_back(run_check("norm.group", [&](CheckScope& s) {
    ng = norm_group(ext);
    s.expect(ng.order() == n, [] { return "|K*/N(L*)| != e*f"; });
    s.expect(ng.coset_representatives.size() == ext.degree(), [] { return "wrong number of coset representatives"; });
  }));

  rep.checks.push_back(run_check("reciprocity.oracle_agreement", [&](CheckScope& s) {
    for (const auto& b : ng.coset_representatives) {
      const auto closed = theta_closed_form(ext, b);
      const auto searched = theta_search(ext, b);
      ++rep.oracle_total;
      if (closed == searched) ++rep.oracle_matches;
      s.expect(closed == searched, [&] {
        return "b = (" + std::to_string(b.valuation) + ", " + b.unit.to_string() + "): closed form " +
               closed.to_string() + ", search " + searched.to_string();
      });
    }
  }));

  rep.checks.push_back(run_check("reciprocity.homomorphism", [&](CheckScope& s) {
    for (const auto& x : ng.coset_representatives)
      for (const auto& y : ng.coset_representatives)
        s.expect(theta_closed_form(ext, multiply(x, y)) ==
                     compose(theta_closed_form(ext, x), theta_closed_form(ext, y)),
                 [&] { return "theta(xy) != theta(x)theta(y)"; });
  }));

  rep.checks.push_back(run_check("reciprocity.bijection", [&](CheckScope& s) {
    std::set<GaloisElement> image;
    for (const auto& b : ng.coset_representatives) image.insert(theta_closed_form(ext, b));
    s.expect(image.size() == ext.degree(), [&] { return "image has " + std::to_string(image.size()) + " elements"; });
  }));

  rep.checks.push_back(run_check("reciprocity.kernel", [&](CheckScope& s) {
    const std::size_t prec = std::min<std::size_t>(ext.precision(), 8);
    std::uniform_int_distribution<std::int64_t> val(-2, 3);
    for (std::size_t k = 0; k < opt.kernel_samples; ++k) {
      const auto beta = random_series(ext.tower(), kExtSymbol, val(rng), prec, rng);
      const auto th = theta_full(ext, norm(ext, beta));
      s.expect(th.is_identity(), [&] { return "theta(N(" + beta.to_string() + ")) = " + th.to_string(); });
    }
  }));

  rep.checks.push_back(run_check("reciprocity.power_law", [&](CheckScope& s) {
    const auto th1 = theta_closed_form(ext, {1, one});
    for (std::int64_t i = -2; i <= n + 2; ++i)
      s.expect(theta_closed_form(ext, {i, one}) == power(th1, i),
               [&] { return "theta(t^i) != theta(t)^i at i = " + std::to_string(i); });
  }));

  rep.checks.push_back(run_check("reciprocity.specializations", [&](CheckScope& s) {
    const auto eta = base_generator(ext);
    for (std::uint64_t l = 0; l + 1 < ext.q(); ++l) {
      const auto u = eta.pow_u(l);
      const auto th = theta_closed_form(ext, {0, u});
      s.expect(th.a() == 0, [&] { return "unit " + u.to_string() + " maps outside inertia"; });
      if (ext.e() == 1) s.expect(th.is_identity(), [&] { return "unit " + u.to_string() + " acts nontrivially"; });
      if (ext.f() == 1)
        s.expect(th.c() == u.pow(-static_cast<std::int64_t>((ext.q() - 1) / ext.e())),
                 [&] { return "totally ramified unit formula fails at " + u.to_string(); });
    }
    if (ext.e() == 1)
      s.expect(theta_closed_form(ext, {1, one}) == frobenius_lift(ext), [] { return "theta(t) is not Frobenius"; });
  }));

  rep.checks.push_back(run_check("reciprocity.uniformizer_independence", [&](CheckScope& s) {
    const auto t = base_uniformizer(ext);
    for (std::size_t k = 0; k < opt.independence_samples; ++k) {
      const auto w = random_base_series(ext, 0, ext.precision(), rng);
      const auto& b = ng.coset_representatives[k % ng.coset_representatives.size()];
      const auto i = b.valuation;
      const auto u = LaurentSeries::constant(b.unit, kBaseSymbol, ext.precision());
      s.expect(theta_search(ext, t, u, i) == theta_search(ext, w * t, u * w.pow(-i), i),
               [&] { return "result changes under t -> w t with w = " + w.to_string(); });
    }
  }));

  rep.checks.push_back(run_check("norm.congruences", [&](CheckScope& s) {
    const auto r = verify_norm_congruences(ext, opt.unit_samples, opt.uniformizer_samples, rng);
    s.expect(r.units_checked == opt.unit_samples, [] { return "unit samples skipped"; });
    s.add_cases(r.units_checked + r.uniformizers_checked, r.failures);
  }));

  rep.checks.push_back(run_check("norm.membership", [&](CheckScope& s) {
    const auto eta = base_generator(ext);
    for (std::uint64_t l = 0; l + 1 < ext.q(); ++l) {
      const auto u = eta.pow_u(l);
      if (ext.f() == 1)
        s.expect(is_norm(ext, ng, {0, u}) == is_norm_unit_criterion(ext, u),
                 [&] { return "norm criterion disagrees at " + u.to_string(); });
      s.expect(is_norm(ext, ng, {0, norm_residue(u).pow_u(ext.e())}),
               [&] { return "unit norm not recognised: " + u.to_string(); });
    }
  }));

  std::vector<Character> chars;
  rep.checks.push_back(run_check("brauer.characters", [&](CheckScope& s) {
    chars = all_characters(ext);
    s.expect(chars.size() == ext.degree(), [] { return "wrong number of characters"; });
    for (const auto& chi : chars) s.expect(chi.is_homomorphism(), [] { return "character is not a homomorphism"; });
  }));

  rep.checks.push_back(run_check("brauer.bilinearity", [&](CheckScope& s) {
    std::uniform_int_distribution<std::int64_t> val(-3, 5);
    for (int k = 0; k < 20; ++k) {
      const BaseFieldClass b1{val(rng), random_base_element(ext, rng, true)};
      const BaseFieldClass b2{val(rng), random_base_element(ext, rng, true)};
      const auto& c1 = chars[static_cast<std::size_t>(k) % chars.size()];
      const auto& c2 = chars[static_cast<std::size_t>(3 * k + 1) % chars.size()];
      s.expect(hasse_invariant(c1, multiply(b1, b2)) == hasse_invariant(c1, b1) + hasse_invariant(c1, b2),
               [] { return "not additive in b"; });
      s.expect(hasse_invariant(c1 + c2, b1) == hasse_invariant(c1, b1) + hasse_invariant(c2, b1),
               [] { return "not additive in chi"; });
    }
  }));

  rep.checks.push_back(run_check("brauer.norm_detection", [&](CheckScope& s) {
    for (std::int64_t i = 0; i <= static_cast<std::int64_t>(ext.f()); ++i)
      for (std::uint64_t l = 0; l + 1 < ext.q(); ++l) {
        const BaseFieldClass b{i, base_generator(ext).pow_u(l)};
        const bool normal = is_norm(ext, ng, b);
        bool all_zero = true;
        for (const auto& chi : chars) {
          const auto inv = hasse_invariant(chi, b);
          all_zero = all_zero && inv.is_zero();
          s.expect(n % inv.order() == 0, [] { return "invariant order does not divide e*f"; });
          if (chi.is_faithful())
            s.expect(inv.is_zero() == normal, [] { return "faithful character disagrees with is_norm"; });
        }
        s.expect(all_zero == normal, [] { return "joint vanishing disagrees with is_norm"; });
      }
    if (ext.e() == 1) {
      const auto frob = frobenius_lift(ext);
      for (const auto& chi : chars)
        for (std::int64_t i = -2; i <= 3; ++i)
          s.expect(hasse_invariant(chi, {i, one}) == chi(frob) * i, [] { return "inv != v(b) chi(Frob)"; });
    }
  }));

  if (is_cyclic(ext)) {
    rep.checks.push_back(run_check("brauer.frobenius_exponent", [&](CheckScope& s) {
      const auto b = quotient_generator(ext);
      s.expect(b.has_value(), [] { return "no generator of K*/N(L*)"; });
      if (!b) return;
      for (const auto& sigma : cyclic_generators(ext)) {
        const auto r = frobenius_exponent(make_cyclic_algebra_spec(ext, sigma, *b));
        s.expect(std::gcd(r, n) == 1, [&] { return "r = " + std::to_string(r) + " not coprime to e*f"; });
        s.expect(power(sigma, r) == theta_closed_form(ext, *b), [] { return "sigma^r != theta(b)"; });
        s.expect(hasse_invariant(character_from_generator(ext, sigma, 1), *b).order() == n,
                 [] { return "invariant of a generator does not have order e*f"; });
      }
    }));
    rep.checks.push_back(run_check("brauer.cyclic_algebra", [&](CheckScope& s) {
      const auto low = ext.with_precision(opt.algebra_precision);
      const auto sigma = cyclic_generators(low).front();
      const auto spec = make_cyclic_algebra_spec(low, sigma, *quotient_generator(low));
      const auto r = cyclic_algebra_check(spec, opt.algebra_samples, rng);
      s.expect(r.triples_checked == opt.algebra_samples, [] { return "samples skipped"; });
      s.add_cases(r.triples_checked + r.center_samples, r.failures);
    }));
  }

  rep.checks.push_back(run_check("series.eth_root", [&](CheckScope& s) {
    std::vector<std::uint64_t> exps{ext.e()};
    if (ext.degree() % ext.p() != 0 && ext.degree() != ext.e()) exps.push_back(ext.degree());
    for (const auto e : exps)
      for (std::size_t k = 0; k < opt.root_samples; ++k) {
        const auto y = random_series(ext.tower(), kExtSymbol, static_cast<std::int64_t>(k % 3) - 1, 32, rng);
        const auto w = y.pow_u(e);
        s.expect(eth_root(w, e).pow_u(e) == w, [&] { return "eth_root fails on " + w.to_string(); });
      }
  }));

  return rep;
}

}  // namespace locrec
