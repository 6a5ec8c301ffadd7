#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "locrec/ffield.hpp"

using namespace locrec;

namespace {

// Reference arithmetic: plain polynomial multiplication over F_p followed by
// long division by the tower's modulus. Shares nothing with the packed-code
// implementation except the modulus itself.
struct PolyOracle {
  std::uint32_t p;
  std::vector<std::uint32_t> m;

  std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
    const std::size_t n = m.size() - 1;
    std::vector<std::uint64_t> prod(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    for (std::size_t d = prod.size(); d-- > n;) {
      const std::uint64_t c = prod[d];
      if (c == 0) continue;
      for (std::size_t k = 0; k <= n; ++k) prod[d - n + k] = (prod[d - n + k] + (p - c) * m[k]) % p;
    }
    std::vector<std::uint32_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
    return out;
  }

  std::vector<std::uint32_t> add(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint32_t> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) % p;
    return out;
  }
};

// Exhaustive irreducibility: no monic factor of degree 1..n/2.
bool irreducible_by_trial(std::uint32_t p, const std::vector<std::uint32_t>& m) {
  const std::size_t n = m.size() - 1;
  for (std::size_t d = 1; d <= n / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::int64_t> g(d + 1);
      std::uint64_t x = idx;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::int64_t>(x % p);
        x /= p;
      }
      g[d] = 1;
      std::vector<std::int64_t> r(m.begin(), m.end());
      for (std::size_t top = n; top >= d; --top) {
        const std::int64_t c = r[top];
        if (c != 0)
          for (std::size_t k = 0; k <= d; ++k) r[top - d + k] = ((r[top - d + k] - c * g[k]) % p + p) % p;
        if (top == d) break;
      }
      bool zero = true;
      for (std::size_t i = 0; i < d; ++i) zero = zero && r[i] == 0;
      if (zero) return false;
    }
  }
  return true;
}

struct TowerCase {
  std::uint32_t p, t, f;
};

const std::vector<TowerCase> kTowers = {{2, 1, 1}, {3, 1, 2}, {5, 1, 1}, {2, 2, 3}, {7, 1, 2},
                                        {3, 2, 2}, {2, 3, 2}, {11, 1, 3}, {13, 1, 1}};

}  // namespace

TEST(FieldArith, PrimeFieldInverseOfTwo) {
  const auto f5 = FieldTower::create(5, 1, 1);
  EXPECT_EQ(FieldElement::from_int(f5, 2).inv(), FieldElement::from_int(f5, 3));
}

TEST(FieldArith, OneTimesVariable) {
  const auto tw = FieldTower::create(3, 1, 2);
  const auto x = FieldElement::variable(tw);
  EXPECT_EQ(FieldElement::one(tw) * x, x);
}

TEST(FieldArith, GeneratorToGroupOrderIsOne) {
  for (const auto& c : kTowers) {
    const auto tw = FieldTower::create(c.p, c.t, c.f);
    EXPECT_TRUE(FieldElement::generator(tw).pow_u(tw->unit_order()).is_one());
  }
}

TEST(FieldArith, MatchesPolynomialOracle) {
  std::mt19937_64 rng(11);
  for (const auto& c : kTowers) {
    const auto tw = FieldTower::create(c.p, c.t, c.f);
    const PolyOracle oracle{c.p, tw->modulus()};
    for (int s = 0; s < 200; ++s) {
      const auto a = random_element(tw, rng);
      const auto b = random_element(tw, rng);
      EXPECT_EQ((a * b).coefficients(), oracle.mul(a.coefficients(), b.coefficients()));
      EXPECT_EQ((a + b).coefficients(), oracle.add(a.coefficients(), b.coefficients()));
      EXPECT_TRUE((a - b + b) == a);
      if (!b.is_zero()) {
        EXPECT_EQ((a / b) * b, a);
      }
    }
  }
}

TEST(FieldArith, TablesAndSchoolbookAgree) {
  std::mt19937_64 rng(5);
  const auto with = FieldTower::create(3, 2, 2, TableMode::Always);
  const auto without = FieldTower::create(3, 2, 2, TableMode::Never);
  ASSERT_TRUE(with->has_tables());
  ASSERT_FALSE(without->has_tables());
  ASSERT_EQ(with->modulus(), without->modulus());
  for (int s = 0; s < 300; ++s) {
    const auto a = random_nonzero(with, rng);
    const auto b = random_nonzero(with, rng);
    const FieldElement a2(without, a.code()), b2(without, b.code());
    EXPECT_EQ((a * b).code(), (a2 * b2).code());
    EXPECT_EQ(a.inv().code(), a2.inv().code());
    EXPECT_EQ(a.log(), a2.log());
  }
}

TEST(FieldArith, ErrorsAreTyped) {
  const auto f5 = FieldTower::create(5, 1, 1);
  const auto f7 = FieldTower::create(7, 1, 1);
  EXPECT_THROW(FieldElement::zero(f5).inv(), DivisionByZero);
  EXPECT_THROW(FieldElement::one(f5) * FieldElement::one(f7), TowerMismatch);
  EXPECT_THROW(FieldTower::create(2, 4, 6), std::overflow_error);
  EXPECT_THROW(FieldTower::create(4, 1, 1), std::invalid_argument);
}

TEST(FieldTower, ModulusIrreducibleByTrialDivision) {
  for (const auto& c : kTowers) {
    const auto tw = FieldTower::create(c.p, c.t, c.f);
    EXPECT_EQ(tw->modulus().size(), tw->degree() + 1u);
    EXPECT_EQ(tw->modulus().back(), 1u);
    EXPECT_TRUE(irreducible_by_trial(c.p, tw->modulus())) << c.p << "," << c.t << "," << c.f;
  }
}

TEST(FieldTower, GeneratorOrderByIteration) {
  for (const auto& c : kTowers) {
    const auto tw = FieldTower::create(c.p, c.t, c.f);
    const auto g = FieldElement::generator(tw);
    auto x = g;
    std::uint64_t k = 1;
    while (!x.is_one()) {
      x = x * g;
      ++k;
    }
    EXPECT_EQ(k, tw->unit_order());
  }
}

TEST(FieldTower, ConstructionIsDeterministic) {
  const auto a = FieldTower::create(2, 2, 3);
  const auto b = FieldTower::create(2, 2, 3);
  EXPECT_TRUE(*a == *b);
  EXPECT_TRUE(same_tower(a, b));
}

TEST(FieldTower, LargestFieldUsesBabyStepGiantStep) {
  const auto tw = FieldTower::create(2, 4, 5);
  ASSERT_EQ(tw->order(), std::uint64_t{1} << 20);
  ASSERT_FALSE(tw->has_tables());
  std::mt19937_64 rng(3);
  for (int s = 0; s < 50; ++s) {
    const auto a = random_nonzero(tw, rng);
    EXPECT_EQ(FieldElement::from_log(tw, static_cast<std::int64_t>(a.log())), a);
  }
}

TEST(Frobenius, NineOverThree) {
  const auto tw = FieldTower::create(3, 1, 2);
  const auto g = FieldElement::generator(tw);
  EXPECT_EQ(frobenius(g, 1), g * g * g);
  EXPECT_EQ(frobenius(g, 2), g);
}

TEST(Frobenius, FixesBaseAndIsAutomorphism) {
  std::mt19937_64 rng(9);
  for (const auto& c : kTowers) {
    const auto tw = FieldTower::create(c.p, c.t, c.f);
    for (int s = 0; s < 100; ++s) {
      const auto a = random_element(tw, rng);
      const auto b = random_element(tw, rng);
      EXPECT_EQ(frobenius(a + b, 1), frobenius(a, 1) + frobenius(b, 1));
      EXPECT_EQ(frobenius(a * b, 1), frobenius(a, 1) * frobenius(b, 1));
      EXPECT_EQ(frobenius(a, c.f), a);
      EXPECT_EQ(frobenius(a, 1 + c.f), frobenius(a, 1));
      if (!a.is_zero()) {
        const auto n = norm_residue(a);
        EXPECT_EQ(frobenius(n, 1), n);
      }
    }
  }
}

TEST(SolvePower, SmallExamples) {
  const auto f5 = FieldTower::create(5, 1, 1);
  auto values = [](const std::vector<FieldElement>& v) {
    std::set<std::uint32_t> s;
    for (const auto& x : v) s.insert(x.code());
    return s;
  };
  EXPECT_EQ(values(solve_power(FieldElement::from_int(f5, 1), 2)), (std::set<std::uint32_t>{1, 4}));
  EXPECT_EQ(values(solve_power(FieldElement::from_int(f5, 4), 2)), (std::set<std::uint32_t>{2, 3}));
  EXPECT_TRUE(solve_power(FieldElement::from_int(f5, 2), 2).empty());
  EXPECT_THROW(solve_power(FieldElement::zero(f5), 2), DivisionByZero);
}

TEST(SolvePower, AgreesWithExhaustiveScan) {
  for (const auto& c : kTowers) {
    const auto tw = FieldTower::create(c.p, c.t, c.f);
    if (tw->order() > 4096) continue;
    for (std::uint64_t e : {1u, 2u, 3u, 4u, 6u}) {
      for (Code w = 1; w < tw->order(); w += 1 + static_cast<Code>(tw->order() / 64)) {
        const FieldElement we(tw, w);
        const auto fast = solve_power(we, e);
        const auto slow = solve_power_exhaustive(we, e);
        std::set<Code> a, b;
        for (const auto& x : fast) a.insert(x.code());
        for (const auto& x : slow) b.insert(x.code());
        EXPECT_EQ(a, b);
        const auto d = std::gcd(e, tw->unit_order());
        EXPECT_TRUE(fast.empty() || fast.size() == d);
        for (const auto& x : fast) EXPECT_EQ(x.pow_u(e), we);
        for (std::size_t i = 1; i < fast.size(); ++i) EXPECT_LT(fast[i - 1].log(), fast[i].log());
      }
    }
  }
}

TEST(NormResidue, Examples) {
  const auto f9 = FieldTower::create(3, 1, 2);
  const auto x = FieldElement::variable(f9);
  EXPECT_EQ(norm_residue(x), x.pow_u(4));
  EXPECT_TRUE(in_base_field(norm_residue(x)));
  EXPECT_TRUE(norm_residue(FieldElement::one(f9)).is_one());
  const auto f7 = FieldTower::create(7, 1, 1);
  EXPECT_EQ(norm_residue(FieldElement::from_int(f7, 3)), FieldElement::from_int(f7, 3));
  EXPECT_THROW(norm_residue(FieldElement::zero(f7)), DivisionByZero);
}

TEST(NormResidue, MultiplicativeAndProductOfConjugates) {
  std::mt19937_64 rng(21);
  for (const auto& c : kTowers) {
    const auto tw = FieldTower::create(c.p, c.t, c.f);
    for (int s = 0; s < 50; ++s) {
      const auto a = random_nonzero(tw, rng);
      const auto b = random_nonzero(tw, rng);
      EXPECT_EQ(norm_residue(a * b), norm_residue(a) * norm_residue(b));
      auto prod = FieldElement::one(tw);
      for (std::uint32_t j = 0; j < c.f; ++j) prod = prod * frobenius(a, j);
      EXPECT_EQ(norm_residue(a), prod);
    }
  }
}

TEST(SubfieldTest, Examples) {
  const auto tw = FieldTower::create(2, 2, 3);
  EXPECT_TRUE(in_base_field(FieldElement::zero(tw)));
  EXPECT_FALSE(in_base_field(FieldElement::generator(tw)));
  EXPECT_TRUE(in_base_field(FieldElement::from_log(tw, static_cast<std::int64_t>(tw->unit_order() / 3))));
  std::size_t count = 0;
  for (Code c = 0; c < tw->order(); ++c) count += in_base_field(FieldElement(tw, c)) ? 1 : 0;
  EXPECT_EQ(count, tw->base_order());
}

TEST(FieldText, ParseAndPrint) {
  const auto tw = FieldTower::create(3, 1, 2);
  const auto g = FieldElement::generator(tw);
  EXPECT_EQ(parse_element(tw, "g"), g);
  EXPECT_EQ(parse_element(tw, "g^3"), g.pow(3));
  EXPECT_EQ(parse_element(tw, "g^-1"), g.inv());
  EXPECT_EQ(parse_element(tw, "0"), FieldElement::zero(tw));
  EXPECT_EQ(parse_element(tw, "1,2"), FieldElement::from_coefficients(tw, std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(parse_element(tw, "1,2").to_string(), "1,2");
  EXPECT_EQ(parse_element(tw, "2").to_string(), "2");
  EXPECT_EQ(g.pow(5).to_power_string(), "g^5");
  EXPECT_THROW(parse_element(tw, "3"), ParseError);
  EXPECT_THROW(parse_element(tw, "1,1,1"), ParseError);
  EXPECT_THROW(parse_element(tw, "h"), ParseError);
  EXPECT_THROW(parse_element(tw, ""), ParseError);
  for (Code c = 0; c < tw->order(); ++c) {
    const FieldElement a(tw, c);
    EXPECT_EQ(parse_element(tw, a.to_string()), a);
    if (!a.is_zero()) {
      EXPECT_EQ(parse_element(tw, a.to_power_string()), a);
    }
  }
}
