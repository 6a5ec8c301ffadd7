// Acceptance suite: one PASS/FAIL line per criterion, exact equality only.
// Exit status is 0 only when every criterion passes within its time budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "locrec/brauer.hpp"
#include "locrec/extension.hpp"
#include "locrec/reciprocity.hpp"
#include "locrec/series.hpp"
#include "matrix.hpp"

using namespace locrec;
using locrec::testing::MatrixEntry;

namespace {

struct Outcome {
  std::size_t cases = 0;
  std::string failure;

  void expect(bool ok, const std::function<std::string()>& what) {
    ++cases;
    if (!ok && failure.empty()) failure = what();
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;  // 0 = no limit
  std::function<void(Outcome&)> body;
};

std::vector<TameAbelianExtension> build_all(const std::vector<MatrixEntry>& entries, std::size_t precision = 32) {
  std::vector<TameAbelianExtension> out;
  for (const auto& m : entries) out.push_back(m.build(precision));
  return out;
}

std::string name_of(const TameAbelianExtension& ext) {
  return "(" + std::to_string(ext.p()) + "," + std::to_string(ext.t()) + "," + std::to_string(ext.f()) + "," +
         std::to_string(ext.e()) + ",u0=" + ext.u0().to_power_string() + ")";
}

std::vector<FieldElement> units_of_k(const TameAbelianExtension& ext) {
  std::vector<FieldElement> out;
  const auto eta = base_generator(ext);
  for (std::uint64_t l = 0; l + 1 < ext.q(); ++l) out.push_back(eta.pow_u(l));
  return out;
}

// Pairs (a, c) found by scanning every c in l*, independent of galois_group.
std::set<GaloisElement> brute_force_pairs(const TameAbelianExtension& ext) {
  std::set<GaloisElement> out;
  const auto& tw = ext.tower();
  std::uint64_t qa = 1;  // q^a mod (Q - 1) is enough for exponents of units
  for (std::uint32_t a = 0; a < ext.f(); ++a) {
    const auto target = ext.u0().pow_u((qa + tw->unit_order() - 1) % tw->unit_order());
    for (Code code = 1; code < tw->order(); ++code) {
      const FieldElement c(tw, code);
      if (c.pow_u(ext.e()) == target) out.insert(GaloisElement(ext, a, c));
    }
    qa = qa * ext.q() % tw->unit_order();
  }
  return out;
}

const std::vector<MatrixEntry>& totally_ramified() {
  static const std::vector<MatrixEntry> m = {
      {5, 1, 1, 2, "1", ""},  {5, 1, 1, 4, "1", ""}, {7, 1, 1, 3, "1", ""},  {7, 1, 1, 6, "g", ""},
      {13, 1, 1, 3, "2", ""}, {13, 1, 1, 4, "g", ""}, {3, 2, 1, 8, "g", ""}, {2, 2, 1, 3, "1", ""},
  };
  return m;
}

}  // namespace

int main() {
  const auto matrix = build_all(locrec::testing::test_matrix());
  const auto unramified = build_all(locrec::testing::unramified_matrix());
  std::mt19937_64 rng(20261015);

  std::vector<Criterion> criteria;

  criteria.push_back({1, "oracle equivalence on coset representatives", 10.0, [&](Outcome& o) {
                        for (const auto& ext : matrix) {
                          const auto ng = norm_group(ext);
                          for (const auto& b : ng.coset_representatives) {
                            const auto closed = theta_closed_form(ext, b);
                            const auto searched = theta_search(ext, b);
                            o.expect(closed == searched, [&] {
                              return name_of(ext) + " b=(" + std::to_string(b.valuation) + "," +
                                     b.unit.to_string() + "): " + closed.to_string() + " vs " + searched.to_string();
                            });
                          }
                        }
                      }});

  criteria.push_back({2, "kernel is the norm group and theta is a bijection", 10.0, [&](Outcome& o) {
                        std::uniform_int_distribution<std::int64_t> val(-3, 3);
                        for (const auto& ext : matrix) {
                          for (int k = 0; k < 200; ++k) {
                            const auto beta = random_series(ext.tower(), kExtSymbol, val(rng), ext.precision(), rng);
                            const auto th = theta_full(ext, norm(ext, beta));
                            o.expect(th.is_identity(), [&] { return name_of(ext) + ": theta(N beta) = " + th.to_string(); });
                          }
                          const auto ng = norm_group(ext);
                          const auto n = static_cast<std::int64_t>(ext.degree());
                          o.expect(ng.order() == n, [&] { return name_of(ext) + ": |K*/N| != ef"; });
                          std::set<GaloisElement> image;
                          for (const auto& b : ng.coset_representatives) image.insert(theta_closed_form(ext, b));
                          o.expect(image.size() == ext.degree(), [&] { return name_of(ext) + ": theta not injective"; });
                          const auto group = galois_group(ext);
                          o.expect(image == std::set<GaloisElement>(group.begin(), group.end()),
                                   [&] { return name_of(ext) + ": theta not onto"; });
                          for (const auto& x : ng.coset_representatives)
                            for (const auto& y : ng.coset_representatives)
                              if (!(x == y))
                                o.expect(!is_norm(ext, ng, multiply(x, inverse(y))),
                                         [&] { return name_of(ext) + ": two representatives share a coset"; });
                        }
                      }});

  criteria.push_back({3, "unramified law theta(b) = Frob^v(b)", 0, [&](Outcome& o) {
                        for (const auto& ext : unramified) {
                          const auto frob = frobenius_lift(ext);
                          // With e = 1 the only pair with a = 1 is Frobenius.
                          std::vector<GaloisElement> lifts;
                          for (const auto& g : brute_force_pairs(ext))
                            if (g.a() == 1) lifts.push_back(g);
                          o.expect(lifts.size() == 1 && lifts.front() == frob,
                                   [&] { return name_of(ext) + ": Frobenius lift"; });
                          const auto f = static_cast<std::int64_t>(ext.f());
                          for (std::int64_t v = -2 * f; v <= 2 * f; ++v)
                            for (const auto& u : units_of_k(ext)) {
                              const BaseFieldClass b{v, u};
                              const auto th = theta_closed_form(ext, b);
                              o.expect(th == power(frob, v), [&] { return name_of(ext) + ": v = " + std::to_string(v); });
                              o.expect(theta_search(ext, b) == th, [&] { return name_of(ext) + ": search disagrees"; });
                            }
                        }
                      }});

  criteria.push_back({4, "totally ramified norm criterion on all units", 0, [&](Outcome& o) {
                        for (const auto& m : totally_ramified()) {
                          const auto ext = m.build();
                          const auto ng = norm_group(ext);
                          const std::uint64_t k = (ext.q() - 1) / ext.e();
                          for (const auto& u : units_of_k(ext)) {
                            const bool expected = u.pow_u(k).is_one();
                            o.expect(is_norm(ext, ng, {0, u}) == expected,
                                     [&] { return name_of(ext) + ": is_norm(" + u.to_string() + ")"; });
                            o.expect(is_norm_unit_criterion(ext, u) == expected,
                                     [&] { return name_of(ext) + ": criterion(" + u.to_string() + ")"; });
                          }
                        }
                      }});

  criteria.push_back({5, "norm congruences for units and uniformizers", 0, [&](Outcome& o) {
                        for (const auto& ext : matrix) {
                          const auto r = verify_norm_congruences(ext, 100, 10, rng);
                          o.expect(r.units_checked == 100 && r.uniformizers_checked == 10,
                                   [&] { return name_of(ext) + ": samples skipped"; });
                          o.expect(r.passed(), [&] { return name_of(ext) + ": " + r.failures.front(); });
                        }
                      }});

  criteria.push_back({6, "ramification filtration G0 = inertia of order e, G1 trivial", 0, [&](Outcome& o) {
                        for (const auto& ext : matrix) {
                          std::size_t inertia = 0;
                          for (const auto& g : brute_force_pairs(ext)) inertia += g.a() == 0 ? 1 : 0;
                          const auto samples = integral_samples(ext);
                          o.expect(inertia == ext.e(), [&] { return name_of(ext) + ": |inertia| != e"; });
                          o.expect(ramification_group(ext, 0).size() == ext.e(), [&] { return name_of(ext) + ": |G0|"; });
                          o.expect(ramification_group(ext, 1).size() == 1, [&] { return name_of(ext) + ": |G1|"; });
                          for (std::int64_t i = -1; i <= 3; ++i)
                            o.expect(ramification_group_direct(ext, i, samples) == ramification_group(ext, i),
                                     [&] { return name_of(ext) + ": direct G_" + std::to_string(i); });
                        }
                      }});

  criteria.push_back({7, "group axioms over all pairs", 0, [&](Outcome& o) {
                        for (const auto& ext : matrix) {
                          const auto brute = brute_force_pairs(ext);
                          const auto group = galois_group(ext);
                          o.expect(std::set<GaloisElement>(group.begin(), group.end()) == brute,
                                   [&] { return name_of(ext) + ": enumeration differs from brute force"; });
                          const auto id = identity(ext);
                          const auto a = alpha(ext);
                          const auto w = residue_generator(ext);
                          for (const auto& g : group) {
                            o.expect(compose(g, id) == g && compose(g, inverse(g)) == id,
                                     [&] { return name_of(ext) + ": identity/inverse at " + g.to_string(); });
                            for (const auto& h : group) {
                              const auto gh = compose(g, h);
                              o.expect(gh == compose(h, g), [&] { return name_of(ext) + ": not commutative"; });
                              o.expect(brute.count(gh) == 1, [&] { return name_of(ext) + ": not closed"; });
                              o.expect(apply(gh, a) == apply(g, apply(h, a)) && apply(gh, w) == apply(g, apply(h, w)),
                                       [&] { return name_of(ext) + ": compose disagrees with the action"; });
                              for (const auto& k : group)
                                o.expect(compose(gh, k) == compose(g, compose(h, k)),
                                         [&] { return name_of(ext) + ": not associative"; });
                            }
                          }
                        }
                      }});

  criteria.push_back({8, "independence from the choice of uniformizer", 0, [&](Outcome& o) {
                        for (const auto& ext : matrix) {
                          const auto t = base_uniformizer(ext);
                          const auto reps = norm_group(ext).coset_representatives;
                          for (std::size_t k = 0; k < 10; ++k) {
                            const auto w = random_base_series(ext, 0, ext.precision(), rng);
                            const auto& b = reps[(k * 7 + 1) % reps.size()];
                            const auto u = LaurentSeries::constant(b.unit, kBaseSymbol, ext.precision());
                            const auto before = theta_search(ext, t, u, b.valuation);
                            const auto after = theta_search(ext, w * t, u * w.pow(-b.valuation), b.valuation);
                            o.expect(before == after && after == theta_closed_form(ext, b),
                                     [&] { return name_of(ext) + ": w = " + w.to_string(); });
                          }
                        }
                      }});

  criteria.push_back({9, "Hasse invariant layer and cyclic algebras", 20.0, [&](Outcome& o) {
                        std::uniform_int_distribution<std::int64_t> val(-4, 6);
                        for (const auto& ext : matrix) {
                          const auto chars = all_characters(ext);
                          const auto ng = norm_group(ext);
                          const auto n = static_cast<std::int64_t>(ext.degree());
                          for (int k = 0; k < 30; ++k) {
                            const BaseFieldClass b1{val(rng), random_base_element(ext, rng, true)};
                            const BaseFieldClass b2{val(rng), random_base_element(ext, rng, true)};
                            const auto& c1 = chars[rng() % chars.size()];
                            const auto& c2 = chars[rng() % chars.size()];
                            o.expect(hasse_invariant(c1, multiply(b1, b2)) ==
                                         hasse_invariant(c1, b1) + hasse_invariant(c1, b2),
                                     [&] { return name_of(ext) + ": not additive in b"; });
                            o.expect(hasse_invariant(c1 + c2, b1) == hasse_invariant(c1, b1) + hasse_invariant(c2, b1),
                                     [&] { return name_of(ext) + ": not additive in chi"; });
                          }
                          for (const auto& chi : chars) {
                            if (!chi.is_faithful()) continue;
                            for (std::int64_t i = -1; i <= static_cast<std::int64_t>(ext.f()); ++i)
                              for (const auto& u : units_of_k(ext)) {
                                const BaseFieldClass b{i, u};
                                o.expect(hasse_invariant(chi, b).is_zero() == is_norm(ext, ng, b),
                                         [&] { return name_of(ext) + ": faithful chi vs is_norm"; });
                              }
                          }
                          if (!is_cyclic(ext)) continue;
                          const auto b = quotient_generator(ext);
                          o.expect(b.has_value(), [&] { return name_of(ext) + ": no quotient generator"; });
                          if (!b) continue;
                          for (const auto& sigma : cyclic_generators(ext)) {
                            const auto r = frobenius_exponent(make_cyclic_algebra_spec(ext, sigma, *b));
                            o.expect(std::gcd(r, n) == 1 && power(sigma, r) == theta_closed_form(ext, *b),
                                     [&] { return name_of(ext) + ": frobenius_exponent r = " + std::to_string(r); });
                          }
                          const auto low = ext.with_precision(8);
                          const auto spec = make_cyclic_algebra_spec(low, cyclic_generators(low).front(), *b);
                          const auto rep = cyclic_algebra_check(spec, 100, rng);
                          o.expect(rep.triples_checked == 100, [&] { return name_of(ext) + ": triples skipped"; });
                          o.expect(rep.passed(), [&] { return name_of(ext) + ": " + rep.failures.front(); });
                        }
                        for (const auto& ext : unramified) {
                          const auto frob = frobenius_lift(ext);
                          for (const auto& chi : all_characters(ext))
                            for (std::int64_t v = -3; v <= 5; ++v)
                              for (const auto& u : units_of_k(ext))
                                o.expect(hasse_invariant(chi, {v, u}) == chi(frob) * v,
                                         [&] { return name_of(ext) + ": inv != v chi(Frob)"; });
                        }
                      }});

  criteria.push_back({10, "Hensel root extraction at precision 32", 0, [&](Outcome& o) {
                        std::uniform_int_distribution<std::int64_t> val(-2, 3);
                        for (const auto& ext : matrix) {
                          const auto e = ext.e();
                          for (int k = 0; k < 100; ++k) {
                            const auto y = random_series(ext.tower(), kExtSymbol, val(rng), 32, rng);
                            const auto w = y.pow_u(e);
                            o.expect(eth_root(w, e).pow_u(e) == w, [&] { return name_of(ext) + ": " + w.to_string(); });
                          }
                        }
                      }});

  bool all_ok = true;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& ex) {
      if (o.failure.empty()) o.failure = std::string("exception: ") + ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.failure.empty() && c.budget_seconds > 0 && secs >= c.budget_seconds)
      o.failure = "exceeded time budget of " + std::to_string(c.budget_seconds) + " s";
    if (o.failure.empty() && o.cases == 0) o.failure = "no cases evaluated";
    const bool ok = o.failure.empty();
    all_ok = all_ok && ok;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.title << " (" << o.cases << " checks, "
              << timing << ")";
    if (!ok) std::cout << ": " << o.failure;
    std::cout << "\n";
  }
  return all_ok ? 0 : 1;
}
