#pragma once

// Truncated Laurent series over the residue field l, in a named uniformizer.
//
// A nonzero series is  X^v * (c_0 + c_1 X + ... + c_{N-1} X^{N-1}) + O(X^{v+N})
// with c_0 != 0, v the exact valuation and N the relative precision. The exact
// zero carries an infinite valuation and short-circuits arithmetic.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "locrec/errors.hpp"
#include "locrec/ffield.hpp"

namespace locrec {

class LaurentSeries {
 public:
  static constexpr std::int64_t kInfiniteValuation = std::numeric_limits<std::int64_t>::max();
  static constexpr std::size_t kDefaultPrecision = 32;

  /// Builds  sum_k coeffs[k] X^{start+k} + O(X^{start+precision}); leading
  /// zeros are stripped. All-zero input yields the exact zero.
  LaurentSeries(TowerPtr tower, std::string symbol, std::int64_t start, std::vector<Code> coeffs,
                std::size_t precision)
      : tower_(std::move(tower)), symbol_(std::move(symbol)), precision_(precision) {
    if (!tower_) throw std::invalid_argument("null field tower");
    if (precision_ == 0) throw std::invalid_argument("series precision must be positive");
    coeffs.resize(precision_, 0);
    normalize(start, std::move(coeffs));
  }

  static LaurentSeries zero(const TowerPtr& t, const std::string& symbol, std::size_t precision = kDefaultPrecision) {
    return {t, symbol, 0, {}, precision};
  }
  static LaurentSeries monomial(const FieldElement& c, const std::string& symbol, std::int64_t exponent,
                                std::size_t precision = kDefaultPrecision) {
    return {c.tower(), symbol, exponent, {c.code()}, precision};
  }
  static LaurentSeries constant(const FieldElement& c, const std::string& symbol,
                                std::size_t precision = kDefaultPrecision) {
    return monomial(c, symbol, 0, precision);
  }
  static LaurentSeries from_elements(const TowerPtr& t, const std::string& symbol, std::int64_t start,
                                     const std::vector<FieldElement>& coeffs,
                                     std::size_t precision = kDefaultPrecision) {
    std::vector<Code> codes;
    codes.reserve(coeffs.size());
    for (const auto& c : coeffs) {
      if (!same_tower(c.tower(), t)) throw TowerMismatch();
      codes.push_back(c.code());
    }
    return {t, symbol, start, std::move(codes), precision};
  }

  const TowerPtr& tower() const { return tower_; }
  const std::string& symbol() const { return symbol_; }
  bool is_zero() const { return valuation_ == kInfiniteValuation; }
  std::int64_t valuation() const { return valuation_; }
  std::size_t precision() const { return precision_; }
  /// First exponent whose coefficient is unknown (valuation + precision).
  std::int64_t bound() const { return valuation_ + static_cast<std::int64_t>(precision_); }
  const std::vector<Code>& codes() const { return coeffs_; }

  FieldElement leading_coefficient() const {
    if (is_zero()) throw DivisionByZero();
    return {tower_, coeffs_[0]};
  }

  /// Coefficient of X^exponent; zero below the valuation.
  FieldElement coefficient(std::int64_t exponent) const {
    if (is_zero() || exponent < valuation_) return FieldElement::zero(tower_);
    if (exponent >= bound()) throw std::out_of_range("coefficient beyond series precision");
    return {tower_, coeffs_[static_cast<std::size_t>(exponent - valuation_)]};
  }

  LaurentSeries operator+(const LaurentSeries& o) const { return add(o, false); }
  LaurentSeries operator-(const LaurentSeries& o) const { return add(o, true); }

  LaurentSeries operator-() const {
    LaurentSeries r = *this;
    for (auto& c : r.coeffs_) c = tower_->neg(c);
    return r;
  }

  LaurentSeries operator*(const LaurentSeries& o) const {
    check_compatible(o);
    if (is_zero()) return *this;
    if (o.is_zero()) return o;
    const std::size_t n = std::min(precision_, o.precision_);
    std::vector<Code> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (coeffs_[i] == 0) continue;
      for (std::size_t j = 0; i + j < n; ++j)
        if (o.coeffs_[j] != 0) out[i + j] = tower_->add(out[i + j], tower_->mul(coeffs_[i], o.coeffs_[j]));
    }
    return {tower_, symbol_, valuation_ + o.valuation_, std::move(out), n};
  }

  LaurentSeries operator/(const LaurentSeries& o) const {
    check_compatible(o);
    return *this * o.inverse();
  }

  LaurentSeries& operator+=(const LaurentSeries& o) { return *this = *this + o; }
  LaurentSeries& operator-=(const LaurentSeries& o) { return *this = *this - o; }
  LaurentSeries& operator*=(const LaurentSeries& o) { return *this = *this * o; }

  LaurentSeries inverse() const {
    if (is_zero()) throw DivisionByZero();
    const std::size_t n = precision_;
    std::vector<Code> out(n, 0);
    const Code lead_inv = tower_->inv(coeffs_[0]);
    out[0] = lead_inv;
    for (std::size_t k = 1; k < n; ++k) {
      Code acc = 0;
      for (std::size_t j = 1; j <= k; ++j)
        if (coeffs_[j] != 0 && out[k - j] != 0) acc = tower_->add(acc, tower_->mul(coeffs_[j], out[k - j]));
      out[k] = tower_->neg(tower_->mul(acc, lead_inv));
    }
    return {tower_, symbol_, -valuation_, std::move(out), n};
  }

  LaurentSeries pow(std::int64_t e) const {
    if (e < 0) return inverse().pow_u(static_cast<std::uint64_t>(-(e + 1)) + 1);
    return pow_u(static_cast<std::uint64_t>(e));
  }

  LaurentSeries pow_u(std::uint64_t e) const {
    LaurentSeries result = constant(FieldElement::one(tower_), symbol_, precision_);
    if (e == 0) return result;
    if (is_zero()) return *this;
    LaurentSeries base = *this;
    while (true) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e == 0) break;
      base = base * base;
    }
    return result;
  }

  LaurentSeries scaled(const FieldElement& c) const {
    if (!same_tower(c.tower(), tower_)) throw TowerMismatch();
    if (is_zero()) return *this;
    std::vector<Code> out(coeffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = tower_->mul(coeffs_[i], c.code());
    return {tower_, symbol_, valuation_, std::move(out), precision_};
  }

  /// Multiplication by X^k.
  LaurentSeries shifted(std::int64_t k) const {
    LaurentSeries r = *this;
    if (!r.is_zero()) r.valuation_ += k;
    return r;
  }

  LaurentSeries truncated(std::size_t precision) const {
    if (precision == 0) throw std::invalid_argument("series precision must be positive");
    if (is_zero()) return zero(tower_, symbol_, precision);
    std::vector<Code> c(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(std::min(precision, precision_)));
    return {tower_, symbol_, valuation_, std::move(c), std::min(precision, precision_)};
  }

  /// Applies fn(exponent, code) -> code to every retained coefficient.
  template <class Fn>
  LaurentSeries map_terms(Fn fn) const {
    if (is_zero()) return *this;
    std::vector<Code> out(coeffs_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = fn(valuation_ + static_cast<std::int64_t>(i), coeffs_[i]);
    return {tower_, symbol_, valuation_, std::move(out), precision_};
  }

  LaurentSeries with_symbol(std::string symbol) const {
    LaurentSeries r = *this;
    r.symbol_ = std::move(symbol);
    return r;
  }

  /// Agreement within the common precision window.
  bool agrees_with(const LaurentSeries& o) const { return (*this - o).is_zero(); }

  bool operator==(const LaurentSeries& o) const {
    return same_tower(tower_, o.tower_) && symbol_ == o.symbol_ && valuation_ == o.valuation_ &&
           (is_zero() || precision_ == o.precision_) && coeffs_ == o.coeffs_;
  }

  /// "c_v·X^v + ... + O(X^{v+N})"; coefficients of extension fields print
  /// as parenthesised coefficient lists.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == 0) continue;
      if (!first) os << " + ";
      first = false;
      const std::string c = FieldElement(tower_, coeffs_[i]).to_string();
      if (tower_->degree() > 1)
        os << '(' << c << ')';
      else
        os << c;
      os << "·" << symbol_ << '^' << valuation_ + static_cast<std::int64_t>(i);
    }
    os << " + O(" << symbol_ << '^' << bound() << ')';
    return os.str();
  }

 private:
  void check_compatible(const LaurentSeries& o) const {
    if (!same_tower(tower_, o.tower_)) throw TowerMismatch();
    if (symbol_ != o.symbol_) throw SymbolMismatch(symbol_, o.symbol_);
  }

  LaurentSeries add(const LaurentSeries& o, bool subtract) const {
    check_compatible(o);
    if (o.is_zero()) return *this;
    if (is_zero()) return subtract ? -o : o;
    const std::int64_t v = std::min(valuation_, o.valuation_);
    const std::int64_t hi = std::min(bound(), o.bound());
    const auto n = static_cast<std::size_t>(hi - v);
    std::vector<Code> out(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      const std::int64_t ex = v + static_cast<std::int64_t>(k);
      Code a = 0, b = 0;
      if (ex >= valuation_) a = coeffs_[static_cast<std::size_t>(ex - valuation_)];
      if (ex >= o.valuation_) b = o.coeffs_[static_cast<std::size_t>(ex - o.valuation_)];
      out[k] = subtract ? tower_->sub(a, b) : tower_->add(a, b);
    }
    return {tower_, symbol_, v, std::move(out), n};
  }

  void normalize(std::int64_t start, std::vector<Code> coeffs) {
    std::size_t k = 0;
    while (k < coeffs.size() && coeffs[k] == 0) ++k;
    if (k == coeffs.size()) {
      valuation_ = kInfiniteValuation;
      coeffs_.clear();
      return;
    }
    valuation_ = start + static_cast<std::int64_t>(k);
    precision_ = coeffs.size() - k;
    coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(k));
    coeffs_ = std::move(coeffs);
  }

  TowerPtr tower_;
  std::string symbol_;
  std::int64_t valuation_ = kInfiniteValuation;
  std::size_t precision_ = kDefaultPrecision;
  std::vector<Code> coeffs_;
};

/// Residue class of a unit: its constant term.
inline FieldElement reduce_residue(const LaurentSeries& u) {
  if (u.is_zero() || u.valuation() != 0)
    throw std::domain_error("reduce_residue: argument is not a unit (valuation " +
                            (u.is_zero() ? std::string("inf") : std::to_string(u.valuation())) + ")");
  return u.leading_coefficient();
}

/// Splits a unit as u = u0 * u1 with u0 constant and u1 = 1 mod X.
inline std::pair<FieldElement, LaurentSeries> split_unit(const LaurentSeries& u) {
  const FieldElement u0 = reduce_residue(u);
  return {u0, u.scaled(u0.inv())};
}

/// An e-th root of w (gcd(e, p) = 1). The leading coefficient is the e-th
/// root of w's leading coefficient with the smallest discrete logarithm; the
/// one-unit part is lifted by Newton iteration y <- y - (y^e - w1)/(e y^{e-1}).
inline LaurentSeries eth_root(const LaurentSeries& w, std::uint64_t e) {
  if (e == 0) throw std::invalid_argument("eth_root: exponent must be positive");
  const auto& tw = w.tower();
  if (e % tw->characteristic() == 0)
    throw WildRamification("eth_root: exponent " + std::to_string(e) + " divisible by the characteristic");
  if (w.is_zero()) return w;
  const auto ei = static_cast<std::int64_t>(e);
  if (nt::mod(w.valuation(), ei) != 0)
    throw NotAPower("eth_root: valuation " + std::to_string(w.valuation()) + " not divisible by " + std::to_string(e));
  const FieldElement lead = w.leading_coefficient();
  const auto roots = solve_power(lead, e);
  if (roots.empty()) throw NotAPower("eth_root: leading coefficient is not an e-th power");

  const LaurentSeries w1 = w.shifted(-w.valuation()).scaled(lead.inv());
  const FieldElement inv_e = FieldElement::from_int(tw, static_cast<std::int64_t>(e % tw->characteristic())).inv();
  LaurentSeries y = LaurentSeries::constant(FieldElement::one(tw), w.symbol(), w.precision());
  for (int iter = 0; iter < 64; ++iter) {
    const LaurentSeries y_pow = y.pow_u(e - 1);
    const LaurentSeries residual = y_pow * y - w1;
    if (residual.is_zero()) break;
    y = y - (residual / y_pow).scaled(inv_e);
  }
  return y.scaled(roots.front()).shifted(w.valuation() / ei);
}

/// A random series of the given valuation (nonzero leading coefficient).
template <class Rng>
LaurentSeries random_series(const TowerPtr& t, const std::string& symbol, std::int64_t valuation,
                            std::size_t precision, Rng& rng) {
  std::vector<Code> c(precision);
  c[0] = random_nonzero(t, rng).code();
  for (std::size_t i = 1; i < precision; ++i) c[i] = random_element(t, rng).code();
  return {t, symbol, valuation, std::move(c), precision};
}

}  // namespace locrec
