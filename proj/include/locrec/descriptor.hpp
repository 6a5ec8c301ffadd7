#pragma once

// Extension descriptors as line-based key=value text:
//
//   p = 2
//   t = 2
//   f = 3
//   e = 3
//   u0 = g^1        # or a coefficient list such as 0,1
//   precision = 32  # optional
//   seed = 7        # optional
//
// Blank lines and '#' comments are ignored.

#include <cstdint>
#include <istream>
#include <optional>
#include <sstream>
#include <string>

#include "locrec/errors.hpp"
#include "locrec/extension.hpp"

namespace locrec {

struct ExtensionDescriptor {
  std::uint32_t p = 0;
  std::uint32_t t = 1;
  std::uint32_t f = 1;
  std::uint32_t e = 1;
  std::string u0 = "1";
  std::optional<std::size_t> precision;
  std::optional<std::uint64_t> seed;

  TameAbelianExtension build(std::size_t default_precision = LaurentSeries::kDefaultPrecision) const {
    return TameAbelianExtension::construct(p, t, f, e, u0, precision.value_or(default_precision));
  }
};

namespace detail {

inline std::string trim_copy(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::uint64_t parse_unsigned(const std::string& key, const std::string& value, std::size_t line) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (value.empty() || value[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != value.size())
    throw ParseError("line " + std::to_string(line) + ": '" + key + "' needs a non-negative integer, got '" +
                     value + "'");
  return v;
}

inline std::uint32_t narrow32(const std::string& key, std::uint64_t v, std::size_t line) {
  if (v > 0xFFFFFFFFull) throw ParseError("line " + std::to_string(line) + ": '" + key + "' out of range");
  return static_cast<std::uint32_t>(v);
}

}  // namespace detail

inline ExtensionDescriptor parse_descriptor(std::istream& in) {
  ExtensionDescriptor d;
  bool seen_p = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = detail::trim_copy(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = detail::trim_copy(text.substr(0, eq));
    const std::string value = detail::trim_copy(text.substr(eq + 1));
    if (key == "p") {
      d.p = detail::narrow32(key, detail::parse_unsigned(key, value, line), line);
      seen_p = true;
    } else if (key == "t") {
      d.t = detail::narrow32(key, detail::parse_unsigned(key, value, line), line);
    } else if (key == "f") {
      d.f = detail::narrow32(key, detail::parse_unsigned(key, value, line), line);
    } else if (key == "e") {
      d.e = detail::narrow32(key, detail::parse_unsigned(key, value, line), line);
    } else if (key == "u0") {
      if (value.empty()) throw ParseError("line " + std::to_string(line) + ": empty u0");
      d.u0 = value;
    } else if (key == "precision") {
      d.precision = detail::parse_unsigned(key, value, line);
    } else if (key == "seed") {
      d.seed = detail::parse_unsigned(key, value, line);
    } else {
      throw ParseError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  if (!seen_p) throw ParseError("descriptor is missing 'p'");
  return d;
}

inline ExtensionDescriptor parse_descriptor(const std::string& text) {
  std::istringstream in(text);
  return parse_descriptor(in);
}

/// Descriptor of an existing extension; u0 is written as a generator power.
inline ExtensionDescriptor descriptor_of(const TameAbelianExtension& ext, std::optional<std::uint64_t> seed = {}) {
  ExtensionDescriptor d;
  d.p = ext.p();
  d.t = ext.t();
  d.f = ext.f();
  d.e = ext.e();
  d.u0 = ext.u0().to_power_string();
  d.precision = ext.precision();
  d.seed = seed;
  return d;
}

inline std::string emit_descriptor(const ExtensionDescriptor& d) {
  std::ostringstream out;
  out << "p = " << d.p << "\nt = " << d.t << "\nf = " << d.f << "\ne = " << d.e << "\nu0 = " << d.u0 << "\n";
  if (d.precision) out << "precision = " << *d.precision << "\n";
  if (d.seed) out << "seed = " << *d.seed << "\n";
  return out.str();
}

}  // namespace locrec
