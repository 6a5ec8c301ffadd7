#pragma once

// Residue-field arithmetic for the tower k = F_{p^t} ⊂ l = F_{p^{tf}}.
//
// The tower is realised as the single field l = F_p[x]/(m(x)) with
// deg m = t*f; k is recovered as the set fixed by x -> x^q, q = p^t.
// Elements are packed as base-p integers ("codes"): the coefficient of x^i is
// the i-th base-p digit. Fields with at most 2^16 elements get exp/log tables
// relative to the stored generator; larger ones (up to 2^20) use schoolbook
// multiplication and baby-step giant-step logarithms.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "locrec/errors.hpp"
#include "locrec/numtheory.hpp"

namespace locrec {

using Code = std::uint32_t;

enum class TableMode { Auto, Always, Never };

namespace detail {

// Dense polynomials over F_p, lowest degree first, no trailing zeros.
using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly poly_rem(Poly a, const Poly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = static_cast<std::uint64_t>(nt::inverse_mod(m.back(), p));
  while (a.size() > dm) {
    const std::uint64_t factor = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - factor) * m[i]) % p);
    trim(a);
  }
  return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  return poly_rem(std::move(prod), m, p);
}

inline Poly poly_powmod(Poly base, std::uint64_t exp, const Poly& m, std::uint32_t p) {
  Poly result{1};
  base = poly_rem(std::move(base), m, p);
  while (exp > 0) {
    if (exp & 1) result = poly_mulmod(result, base, m, p);
    base = poly_mulmod(base, base, m, p);
    exp >>= 1;
  }
  return result;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Rabin's test: m (monic, degree n) is irreducible over F_p iff
/// x^{p^n} = x mod m and gcd(x^{p^{n/r}} - x, m) = 1 for every prime r | n.
inline bool is_irreducible(const Poly& m, std::uint32_t p) {
  const std::size_t n = m.size() - 1;
  if (n == 1) return true;
  auto frob_power = [&](std::size_t k) {
    Poly h{0, 1};
    for (std::size_t i = 0; i < k; ++i) h = poly_powmod(h, p, m, p);
    return h;
  };
  auto minus_x = [&](Poly h) {
    if (h.size() < 2) h.resize(2, 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    return h;
  };
  if (!minus_x(frob_power(n)).empty()) return false;
  for (const auto r : nt::prime_factors(n)) {
    const Poly g = poly_gcd(minus_x(frob_power(n / r)), m, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

class FieldElement;

/// The residue tower. Immutable after construction; share it through
/// std::shared_ptr<const FieldTower>.
class FieldTower {
 public:
  static constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 20;
  static constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 16;

  static std::shared_ptr<const FieldTower> create(std::uint32_t p, std::uint32_t t, std::uint32_t f,
                                                  TableMode mode = TableMode::Auto) {
    return std::shared_ptr<const FieldTower>(new FieldTower(p, t, f, mode));
  }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t base_degree() const { return t_; }      // t
  std::uint32_t relative_degree() const { return f_; }  // f
  std::uint32_t degree() const { return n_; }           // t*f over F_p
  std::uint64_t base_order() const { return q_; }       // q = |k|
  std::uint64_t order() const { return order_; }        // q^f = |l|
  std::uint64_t unit_order() const { return order_ - 1; }
  const detail::Poly& modulus() const { return modulus_; }
  Code generator_code() const { return generator_; }
  bool has_tables() const { return !exp_.empty(); }

  bool operator==(const FieldTower& o) const {
    return p_ == o.p_ && t_ == o.t_ && f_ == o.f_ && modulus_ == o.modulus_ && generator_ == o.generator_;
  }

  std::vector<std::uint32_t> digits(Code a) const {
    std::vector<std::uint32_t> d(n_);
    for (std::uint32_t i = 0; i < n_; ++i) {
      d[i] = a % p_;
      a /= p_;
    }
    return d;
  }

  Code encode(std::span<const std::uint32_t> d) const {
    if (d.size() > n_) throw std::invalid_argument("too many coefficients for field degree");
    Code c = 0;
    for (std::size_t i = d.size(); i-- > 0;) c = c * p_ + d[i] % p_;
    return c;
  }

  /// Image of an integer in the prime field.
  Code from_int(std::int64_t v) const { return static_cast<Code>(nt::mod(v, p_)); }

  Code add(Code a, Code b) const {
    if (p_ == 2) return a ^ b;
    Code out = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
      const Code s = (a % p_ + b % p_) % p_;
      out += s * pow_p_[i];
      a /= p_;
      b /= p_;
    }
    return out;
  }

  Code neg(Code a) const {
    if (p_ == 2) return a;
    Code out = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
      out += ((p_ - a % p_) % p_) * pow_p_[i];
      a /= p_;
    }
    return out;
  }

  Code sub(Code a, Code b) const { return add(a, neg(b)); }

  Code mul(Code a, Code b) const {
    if (a == 0 || b == 0) return 0;
    if (has_tables()) return exp_[(log_[a] + log_[b]) % unit_order()];
    return mul_schoolbook(a, b);
  }

  Code pow(Code a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (has_tables()) return exp_[nt::mulmod(log_[a], e % unit_order(), unit_order())];
    e %= unit_order();
    Code result = 1;
    while (e > 0) {
      if (e & 1) result = mul_schoolbook(result, a);
      a = mul_schoolbook(a, a);
      e >>= 1;
    }
    return result;
  }

  Code pow_signed(Code a, std::int64_t e) const {
    if (e >= 0) return pow(a, static_cast<std::uint64_t>(e));
    if (a == 0) throw DivisionByZero();
    const auto m = static_cast<std::int64_t>(unit_order());
    return pow(a, static_cast<std::uint64_t>(nt::mod(e, m)));
  }

  Code inv(Code a) const {
    if (a == 0) throw DivisionByZero();
    return pow(a, unit_order() - 1);
  }

  Code div(Code a, Code b) const { return mul(a, inv(b)); }

  /// a^{q^j}; j is reduced mod f.
  Code frobenius(Code a, std::int64_t j) const {
    const auto jr = static_cast<std::uint64_t>(nt::mod(j, f_));
    if (a == 0 || jr == 0) return a;
    return pow(a, nt::checked_pow(q_, jr));
  }

  bool in_base(Code a) const { return pow(a, q_) == a; }

  Code exp(std::uint64_t k) const {
    k %= unit_order();
    if (has_tables()) return exp_[k];
    return pow(generator_, k);
  }

  /// Discrete logarithm to the stored generator, in [0, |l*|).
  std::uint64_t log(Code a) const {
    if (a == 0) throw DivisionByZero();
    if (has_tables()) return log_[a];
    Code y = a;
    for (std::uint64_t i = 0; i <= bsgs_step_; ++i) {
      if (const auto it = baby_.find(y); it != baby_.end())
        return (i * bsgs_step_ + it->second) % unit_order();
      y = mul_schoolbook(y, giant_);
    }
    throw InvariantViolation("discrete logarithm not found");
  }

 private:
  FieldTower(std::uint32_t p, std::uint32_t t, std::uint32_t f, TableMode mode) : p_(p), t_(t), f_(f) {
    if (!nt::is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
    if (t == 0 || f == 0) throw std::invalid_argument("field degrees must be positive");
    n_ = t * f;
    q_ = nt::checked_pow(p, t, kMaxOrder);
    order_ = nt::checked_pow(p, n_, kMaxOrder);
    pow_p_.resize(n_);
    for (std::uint32_t i = 0; i < n_; ++i) pow_p_[i] = static_cast<Code>(nt::checked_pow(p, i));
    choose_modulus();
    choose_generator();
    const bool tables = mode == TableMode::Always || (mode == TableMode::Auto && order_ <= kTableLimit);
    if (tables) {
      exp_.resize(unit_order());
      log_.assign(order_, 0);
      Code x = 1;
      for (std::uint64_t k = 0; k < unit_order(); ++k) {
        exp_[k] = x;
        log_[x] = static_cast<std::uint32_t>(k);
        x = mul_schoolbook(x, generator_);
      }
    } else {
      bsgs_step_ = 1;
      while (bsgs_step_ * bsgs_step_ < unit_order()) ++bsgs_step_;
      Code x = 1;
      for (std::uint64_t j = 0; j < bsgs_step_; ++j) {
        baby_.emplace(x, static_cast<std::uint32_t>(j));
        x = mul_schoolbook(x, generator_);
      }
      giant_ = pow(x, unit_order() - 1);  // g^{-m}
    }
  }

  void choose_modulus() {
    // Deterministic in (p, t, f) so runs are reproducible.
    std::mt19937_64 rng(0x9E3779B97F4A7C15ULL ^ (std::uint64_t{p_} << 40) ^ (std::uint64_t{t_} << 20) ^ f_);
    std::uniform_int_distribution<std::uint32_t> digit(0, p_ - 1), nonzero(1, p_ - 1);
    for (;;) {
      detail::Poly m(n_ + 1);
      m[0] = nonzero(rng);
      for (std::uint32_t i = 1; i < n_; ++i) m[i] = digit(rng);
      m[n_] = 1;
      if (detail::is_irreducible(m, p_)) {
        modulus_ = std::move(m);
        return;
      }
    }
  }

  void choose_generator() {
    const auto primes = nt::prime_factors(unit_order());
    for (Code c = 1; c < order_; ++c) {
      bool primitive = true;
      for (const auto r : primes) {
        if (pow_schoolbook(c, unit_order() / r) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        generator_ = c;
        return;
      }
    }
    throw InvariantViolation("no multiplicative generator found");
  }

  Code mul_schoolbook(Code a, Code b) const {
    std::uint64_t acc[64] = {};
    std::uint32_t da[32], db[32];
    for (std::uint32_t i = 0; i < n_; ++i) {
      da[i] = a % p_;
      a /= p_;
      db[i] = b % p_;
      b /= p_;
    }
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (da[i] == 0) continue;
      for (std::uint32_t j = 0; j < n_; ++j) acc[i + j] += std::uint64_t{da[i]} * db[j];
    }
    for (std::uint32_t k = 0; k + 1 < 2 * n_; ++k) acc[k] %= p_;
    // Reduce with the monic modulus from the top down.
    for (std::uint32_t k = 2 * n_ - 1; k-- > n_;) {
      const std::uint64_t c = acc[k] % p_;
      if (c == 0) continue;
      acc[k] = 0;
      for (std::uint32_t i = 0; i < n_; ++i)
        acc[k - n_ + i] = (acc[k - n_ + i] + (p_ - c) * modulus_[i]) % p_;
    }
    Code out = 0;
    for (std::uint32_t i = n_; i-- > 0;) out = out * p_ + static_cast<Code>(acc[i] % p_);
    return out;
  }

  Code pow_schoolbook(Code a, std::uint64_t e) const {
    Code result = 1;
    while (e > 0) {
      if (e & 1) result = mul_schoolbook(result, a);
      a = mul_schoolbook(a, a);
      e >>= 1;
    }
    return result;
  }

  std::uint32_t p_, t_, f_, n_ = 0;
  std::uint64_t q_ = 0, order_ = 0;
  std::vector<Code> pow_p_;
  detail::Poly modulus_;
  Code generator_ = 0;
  std::vector<Code> exp_;
  std::vector<std::uint32_t> log_;
  std::unordered_map<Code, std::uint32_t> baby_;
  std::uint64_t bsgs_step_ = 0;
  Code giant_ = 0;
};

using TowerPtr = std::shared_ptr<const FieldTower>;

inline bool same_tower(const TowerPtr& a, const TowerPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Comma-separated coefficient list, low degree first, trailing zeros dropped.
inline std::string format_coefficients(std::span<const std::uint32_t> coeffs) {
  std::size_t len = coeffs.size();
  while (len > 1 && coeffs[len - 1] == 0) --len;
  if (len == 0) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < len; ++i) os << (i ? "," : "") << coeffs[i];
  return os.str();
}

/// An element of l. Carries a handle to its tower.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(TowerPtr tower, Code code) : tower_(std::move(tower)), code_(code) {
    if (!tower_) throw std::invalid_argument("null field tower");
    if (code_ >= tower_->order()) throw std::out_of_range("field element code out of range");
  }

  static FieldElement zero(const TowerPtr& t) { return {t, 0}; }
  static FieldElement one(const TowerPtr& t) { return {t, 1}; }
  static FieldElement generator(const TowerPtr& t) { return {t, t->generator_code()}; }
  static FieldElement from_log(const TowerPtr& t, std::int64_t k) {
    return {t, t->exp(static_cast<std::uint64_t>(nt::mod(k, static_cast<std::int64_t>(t->unit_order()))))};
  }
  static FieldElement from_int(const TowerPtr& t, std::int64_t v) { return {t, t->from_int(v)}; }
  static FieldElement from_coefficients(const TowerPtr& t, std::span<const std::uint32_t> c) {
    return {t, t->encode(c)};
  }
  /// The polynomial variable x of F_p[x]/(m).
  static FieldElement variable(const TowerPtr& t) {
    const std::uint32_t x[2] = {0, 1};
    if (t->degree() == 1) return {t, t->from_int(-static_cast<std::int64_t>(t->modulus()[0]))};
    return from_coefficients(t, x);
  }

  const TowerPtr& tower() const { return tower_; }
  Code code() const { return code_; }
  bool is_zero() const { return code_ == 0; }
  bool is_one() const { return code_ == 1; }
  std::vector<std::uint32_t> coefficients() const { return tower_->digits(code_); }
  std::uint64_t log() const { return tower_->log(code_); }

  FieldElement operator+(const FieldElement& o) const { return {tower_, tower_->add(code_, checked(o))}; }
  FieldElement operator-(const FieldElement& o) const { return {tower_, tower_->sub(code_, checked(o))}; }
  FieldElement operator*(const FieldElement& o) const { return {tower_, tower_->mul(code_, checked(o))}; }
  FieldElement operator/(const FieldElement& o) const { return {tower_, tower_->div(code_, checked(o))}; }
  FieldElement operator-() const { return {tower_, tower_->neg(code_)}; }
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  FieldElement inv() const { return {tower_, tower_->inv(code_)}; }
  FieldElement pow(std::int64_t e) const { return {tower_, tower_->pow_signed(code_, e)}; }
  FieldElement pow_u(std::uint64_t e) const { return {tower_, tower_->pow(code_, e)}; }

  bool operator==(const FieldElement& o) const { return code_ == o.code_ && same_tower(tower_, o.tower_); }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  /// Coefficient-vector form, e.g. "1,0,2".
  std::string to_string() const { return format_coefficients(coefficients()); }
  /// Generator-power form "g^k", or "0".
  std::string to_power_string() const { return is_zero() ? "0" : "g^" + std::to_string(log()); }

 private:
  Code checked(const FieldElement& o) const {
    if (!same_tower(tower_, o.tower_)) throw TowerMismatch();
    return o.code_;
  }

  TowerPtr tower_;
  Code code_ = 0;
};

/// x^{q^j}, q = |k|. Only j mod f matters.
inline FieldElement frobenius(const FieldElement& a, std::int64_t j) {
  return {a.tower(), a.tower()->frobenius(a.code(), j)};
}

/// Membership in the base field k (fixed by x -> x^q).
inline bool in_base_field(const FieldElement& a) { return a.tower()->in_base(a.code()); }

/// Residue norm N_{l/k}(a) = a^{(q^f - 1)/(q - 1)}.
inline FieldElement norm_residue(const FieldElement& a) {
  if (a.is_zero()) throw DivisionByZero();
  const auto& t = *a.tower();
  return a.pow_u(t.unit_order() / (t.base_order() - 1));
}

/// All c in l* with c^e = w, ordered by discrete logarithm. Empty when w is
/// not an e-th power; otherwise of size gcd(e, |l*|).
inline std::vector<FieldElement> solve_power(const FieldElement& w, std::uint64_t e) {
  if (w.is_zero()) throw DivisionByZero();
  if (e == 0) throw std::invalid_argument("solve_power: exponent must be positive");
  const auto& tw = w.tower();
  const std::uint64_t n = tw->unit_order();
  const std::uint64_t d = std::gcd(e, n);
  const std::uint64_t lw = w.log();
  if (lw % d != 0) return {};
  const std::uint64_t m = n / d;
  const std::uint64_t base =
      m == 1 ? 0
             : nt::mulmod((lw / d) % m, static_cast<std::uint64_t>(nt::inverse_mod(static_cast<std::int64_t>((e / d) % m),
                                                                                   static_cast<std::int64_t>(m))),
                          m);
  std::vector<FieldElement> out;
  out.reserve(d);
  for (std::uint64_t j = 0; j < d; ++j) out.push_back(FieldElement::from_log(tw, static_cast<std::int64_t>(base + j * m)));
  return out;
}

/// Brute-force counterpart of solve_power: scans every nonzero element.
inline std::vector<FieldElement> solve_power_exhaustive(const FieldElement& w, std::uint64_t e) {
  if (w.is_zero()) throw DivisionByZero();
  const auto& tw = w.tower();
  std::vector<FieldElement> out;
  for (Code c = 1; c < tw->order(); ++c)
    if (tw->pow(c, e) == w.code()) out.emplace_back(tw, c);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.log() < b.log(); });
  return out;
}

/// Parses "0", "g^k" (k may be negative) or a coefficient list "c0,c1,...".
inline FieldElement parse_element(const TowerPtr& tower, std::string_view text) {
  auto strip = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  text = strip(text);
  if (text.empty()) throw ParseError("empty field element");
  auto to_int = [&](std::string_view s) -> std::int64_t {
    s = strip(s);
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(std::string(s), &pos);
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + std::string(s) + "' in field element");
    }
    if (pos != s.size()) throw ParseError("bad integer '" + std::string(s) + "' in field element");
    return v;
  };
  if (text.starts_with("g^")) return FieldElement::from_log(tower, to_int(text.substr(2)));
  if (text == "g") return FieldElement::generator(tower);
  std::vector<std::uint32_t> coeffs;
  while (true) {
    const auto comma = text.find(',');
    const std::int64_t v = to_int(text.substr(0, comma));
    if (v < 0 || v >= static_cast<std::int64_t>(tower->characteristic()))
      throw ParseError("coefficient out of range for F_" + std::to_string(tower->characteristic()));
    coeffs.push_back(static_cast<std::uint32_t>(v));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (coeffs.size() > tower->degree()) throw ParseError("too many coefficients in field element");
  return FieldElement::from_coefficients(tower, coeffs);
}

template <class Rng>
FieldElement random_element(const TowerPtr& t, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, t->order() - 1);
  return {t, static_cast<Code>(dist(rng))};
}

template <class Rng>
FieldElement random_nonzero(const TowerPtr& t, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(1, t->order() - 1);
  return {t, static_cast<Code>(dist(rng))};
}

}  // namespace locrec
