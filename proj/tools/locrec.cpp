// locrec: batch front end over the library.
//
//   locrec validate   <config>
//   locrec galois     <config>
//   locrec recip      <config>
//   locrec norm-group <config>
//   locrec hasse      <config> [--character K]
//   locrec check      <config>... [--jobs N]
//
// Exit codes: 0 ok, 1 validation failure, 2 property-suite failure,
// 3 I/O or parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "locrec/brauer.hpp"
#include "locrec/descriptor.hpp"
#include "locrec/extension.hpp"
#include "locrec/reciprocity.hpp"
#include "locrec/verify.hpp"

using namespace locrec;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kSuite = 2;
constexpr int kIo = 3;

/// Raised for anything that should end in exit code 1.
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> configs;
  bool json = false;
  std::optional<std::size_t> precision;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> character;
  std::size_t jobs = 0;
  SuiteOptions suite;
};

std::string read_config(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Precedence: --precision, then the config's own value, then LOCREC_PRECISION.
std::size_t default_precision() {
  const char* env = std::getenv("LOCREC_PRECISION");
  if (!env || !*env) return LaurentSeries::kDefaultPrecision;
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(env, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || env[pos] != '\0' || v == 0) throw ParseError(std::string("bad LOCREC_PRECISION '") + env + "'");
  return static_cast<std::size_t>(v);
}

struct Loaded {
  ExtensionDescriptor descriptor;
  TameAbelianExtension ext;
  std::uint64_t seed;
};

Loaded load(const std::string& path, const Options& opt) {
  auto d = parse_descriptor(read_config(path));
  if (opt.precision) d.precision = *opt.precision;
  TameAbelianExtension ext = [&] {
    try {
      return d.build(default_precision());
    } catch (const ParseError&) {
      throw;
    } catch (const std::invalid_argument& ex) {
      throw ValidationFailure(ex.what());
    } catch (const std::domain_error& ex) {
      throw ValidationFailure(ex.what());
    }
  }();
  const std::uint64_t seed = opt.seed.value_or(d.seed.value_or(1));
  return {d, ext, seed};
}

Json element_json(const GaloisElement& g) { return {{"a", g.a()}, {"c", g.c().to_string()}}; }

Json class_json(const BaseFieldClass& b) { return {{"valuation", b.valuation}, {"unit", b.unit.to_string()}}; }

Json extension_json(const TameAbelianExtension& ext) {
  return {{"p", ext.p()},         {"t", ext.t()},          {"f", ext.f()},
          {"e", ext.e()},         {"u0", ext.u0().to_power_string()},
          {"q", ext.q()},         {"degree", ext.degree()}, {"precision", ext.precision()}};
}

std::string class_text(const BaseFieldClass& b) {
  return "t^" + std::to_string(b.valuation) + " * " + b.unit.to_string();
}

std::string join(const std::vector<std::int64_t>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
  return s + "]";
}

void print_header(std::ostream& out, const TameAbelianExtension& ext) {
  out << "extension p=" << ext.p() << " t=" << ext.t() << " f=" << ext.f() << " e=" << ext.e()
      << " u0=" << ext.u0().to_power_string() << " (q=" << ext.q() << ", degree " << ext.degree()
      << ", precision " << ext.precision() << ")\n";
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& opt) {
  const auto [d, ext, seed] = load(opt.configs.front(), opt);
  struct Item {
    std::string name;
    bool ok;
  };
  const auto structure_factors = structure(ext);
  std::vector<Item> items{
      {"galois group has order e*f", galois_group(ext).size() == ext.degree()},
      {"inertia group has order e", ramification_group(ext, 0).size() == ext.e()},
      {"wild inertia is trivial", ramification_group(ext, 1).size() == 1},
      {"norm quotient has order e*f", norm_group(ext).order() == static_cast<std::int64_t>(ext.degree())},
  };
  bool ok = true;
  for (const auto& i : items) ok = ok && i.ok;
  if (opt.json) {
    Json j{{"extension", extension_json(ext)}, {"structure", structure_factors}, {"cyclic", is_cyclic(ext)},
           {"valid", ok}};
    for (const auto& i : items) j["invariants"][i.name] = i.ok;
    std::cout << j.dump(2) << "\n";
  } else {
    print_header(std::cout, ext);
    std::cout << "structure " << join(structure_factors) << (is_cyclic(ext) ? " (cyclic)" : "") << "\n";
    for (const auto& i : items) std::cout << (i.ok ? "  ok    " : "  FAIL  ") << i.name << "\n";
  }
  return ok ? kOk : kValidation;
}

int cmd_galois(const Options& opt) {
  const auto [d, ext, seed] = load(opt.configs.front(), opt);
  const auto group = galois_group(ext);
  const auto index_of = [&](const GaloisElement& g) {
    return static_cast<std::size_t>(std::lower_bound(group.begin(), group.end(), g) - group.begin());
  };
  std::vector<std::vector<std::size_t>> table(group.size());
  for (std::size_t i = 0; i < group.size(); ++i)
    for (const auto& h : group) table[i].push_back(index_of(compose(group[i], h)));
  const std::vector<std::int64_t> levels{-1, 0, 1};

  if (opt.json) {
    Json j{{"extension", extension_json(ext)}, {"structure", structure(ext)}};
    for (const auto& g : group) j["elements"].push_back({{"a", g.a()}, {"c", g.c().to_string()}, {"order", order(g)}});
    j["table"] = table;
    for (auto i : levels) {
      Json members = Json::array();
      for (const auto& g : ramification_group(ext, i)) members.push_back(index_of(g));
      j["ramification"].push_back({{"index", i}, {"members", members}});
    }
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  print_header(std::cout, ext);
  std::cout << "structure " << join(structure(ext)) << "\n\nelements (a, c):\n";
  for (std::size_t i = 0; i < group.size(); ++i)
    std::cout << "  g" << i << " = " << group[i].to_string() << "  order " << order(group[i]) << "\n";
  std::cout << "\ncomposition g_i * g_j:\n";
  for (const auto& row : table) {
    std::cout << " ";
    for (auto k : row) std::cout << " g" << k;
    std::cout << "\n";
  }
  std::cout << "\nramification filtration:\n";
  for (auto i : levels) {
    std::cout << "  G_" << i << ":";
    for (const auto& g : ramification_group(ext, i)) std::cout << " g" << index_of(g);
    std::cout << "\n";
  }
  return kOk;
}

int cmd_recip(const Options& opt) {
  const auto [d, ext, seed] = load(opt.configs.front(), opt);
  const auto ng = norm_group(ext);
  Json rows = Json::array();
  std::size_t agree = 0;
  if (!opt.json) {
    print_header(std::cout, ext);
    std::cout << "b over coset representatives of K*/N(L*):\n";
  }
  for (const auto& b : ng.coset_representatives) {
    const auto closed = theta_closed_form(ext, b);
    const auto searched = theta_search(ext, b);
    const bool same = closed == searched;
    agree += same ? 1 : 0;
    if (opt.json) {
      auto row = class_json(b);
      row["galois"] = element_json(closed);
      row["search"] = element_json(searched);
      row["agree"] = same;
      rows.push_back(row);
    } else {
      std::cout << "  " << class_text(b) << "  ->  " << closed.to_string() << (same ? "" : "   MISMATCH search ")
                << (same ? "" : searched.to_string()) << "\n";
    }
  }
  const std::string agreement = std::to_string(agree) + "/" + std::to_string(ng.coset_representatives.size());
  if (opt.json)
    std::cout << Json{{"extension", extension_json(ext)}, {"rows", rows}, {"agreement", agreement}}.dump(2) << "\n";
  else
    std::cout << "closed form vs search: " << agreement << "\n";
  return agree == ng.coset_representatives.size() ? kOk : kSuite;
}

int cmd_norm_group(const Options& opt) {
  const auto [d, ext, seed] = load(opt.configs.front(), opt);
  const auto ng = norm_group(ext);
  if (opt.json) {
    Json reps = Json::array();
    for (const auto& b : ng.coset_representatives) reps.push_back(class_json(b));
    std::cout << Json{{"extension", extension_json(ext)},
                      {"eta", ng.eta.to_string()},
                      {"unit_modulus", ng.unit_modulus},
                      {"relations", ng.relations},
                      {"invariant_factors", ng.invariant_factors},
                      {"order", ng.order()},
                      {"unit_index", ng.unit_index},
                      {"coset_representatives", reps}}
                     .dump(2)
              << "\n";
    return kOk;
  }
  print_header(std::cout, ext);
  std::cout << "K* = Z (+) Z/" << ng.unit_modulus << " via (v(b), log_eta(unit)), eta = " << ng.eta.to_string()
            << "\nnorm group generated by:\n";
  for (const auto& r : ng.relations) std::cout << "  " << join(r) << "\n";
  std::cout << "quotient " << join(ng.invariant_factors) << ", order " << ng.order() << ", unit index "
            << ng.unit_index << "\ncoset representatives:\n";
  for (const auto& b : ng.coset_representatives) std::cout << "  " << class_text(b) << "\n";
  return kOk;
}

int cmd_hasse(const Options& opt) {
  const auto [d, ext, seed] = load(opt.configs.front(), opt);
  const auto chars = all_characters(ext);
  std::size_t pick = 0;
  if (opt.character) {
    pick = *opt.character;
    if (pick >= chars.size())
      throw ValidationFailure("character index " + std::to_string(pick) + " out of range (group has " +
                              std::to_string(chars.size()) + " characters)");
  } else {
    // Prefer a faithful character so that the table detects norms.
    for (std::size_t k = 0; k < chars.size(); ++k)
      if (chars[k].is_faithful()) {
        pick = k;
        break;
      }
    if (pick == 0 && chars.size() > 1) pick = 1;
  }
  const auto& chi = chars[pick];
  const auto ng = norm_group(ext);
  std::optional<GaloisElement> sigma;
  if (is_cyclic(ext)) sigma = cyclic_generators(ext).front();

  if (opt.json) {
    Json j{{"extension", extension_json(ext)}, {"character_index", pick}, {"faithful", chi.is_faithful()}};
    for (std::size_t k = 0; k < chi.elements().size(); ++k)
      j["character"].push_back({{"element", element_json(chi.elements()[k])}, {"value", chi.values()[k].to_string()}});
    if (sigma) {
      j["generator"] = element_json(*sigma);
      j["chi_generator_value"] = chi(*sigma).to_string();
    }
    for (const auto& b : ng.coset_representatives) {
      const auto inv = hasse_invariant(chi, b);
      j["rows"].push_back({{"b", class_json(b)},
                           {"invariant_numerator", inv.numerator()},
                           {"invariant_denominator", inv.denominator()},
                           {"is_norm", is_norm(ext, ng, b)}});
    }
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  print_header(std::cout, ext);
  std::cout << "character #" << pick << (chi.is_faithful() ? " (faithful)" : "") << ":\n";
  for (std::size_t k = 0; k < chi.elements().size(); ++k)
    std::cout << "  chi" << chi.elements()[k].to_string() << " = " << chi.values()[k].to_string() << "\n";
  if (sigma) std::cout << "generator " << sigma->to_string() << ", chi(generator) = " << chi(*sigma).to_string() << "\n";
  std::cout << "inv(chi, b):\n";
  for (const auto& b : ng.coset_representatives)
    std::cout << "  " << class_text(b) << "  ->  " << hasse_invariant(chi, b).to_string()
              << (is_norm(ext, ng, b) ? "  (norm)" : "") << "\n";
  return kOk;
}

Json report_json(const SuiteReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json item{{"name", c.name}, {"passed", c.passed}, {"cases", c.cases}};
    if (!c.passed) item["detail"] = c.detail;
    checks.push_back(item);
  }
  return {{"descriptor", r.descriptor}, {"seed", r.seed},          {"group_order", r.group_order},
          {"structure", r.structure},   {"agreement", r.agreement()}, {"passed", r.passed()},
          {"checks", checks}};
}

void report_text(std::ostream& out, const std::string& path, const SuiteReport& r) {
  out << "== " << path << " (seed " << r.seed << ")\n";
  out << "group of order " << r.group_order << ", structure " << join(r.structure) << ", oracle agreement "
      << r.agreement() << "\n";
  for (const auto& c : r.checks) {
    out << (c.passed ? "  PASS  " : "  FAIL  ") << c.name << " (" << c.cases << ")";
    if (!c.passed) out << ": " << c.detail;
    out << "\n";
  }
  out << (r.passed() ? "all checks passed\n" : "property suite FAILED\n");
}

int cmd_check(const Options& opt) {
  // Load everything up front so that parse and validation errors win.
  std::vector<Loaded> jobs;
  for (const auto& path : opt.configs) jobs.push_back(load(path, opt));

  const auto run = [&](std::size_t k) {
    SuiteOptions so = opt.suite;
    so.seed = jobs[k].seed;
    return run_property_suite(jobs[k].ext, so);
  };
  std::vector<SuiteReport> reports(jobs.size());
  const std::size_t width = opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < jobs.size(); start += width) {
    std::vector<std::future<SuiteReport>> batch;
    for (std::size_t k = start; k < std::min(jobs.size(), start + width); ++k)
      batch.push_back(std::async(std::launch::async, run, k));
    for (std::size_t k = 0; k < batch.size(); ++k) reports[start + k] = batch[k].get();
  }

  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();
  if (opt.json) {
    Json out = Json::array();
    for (std::size_t k = 0; k < reports.size(); ++k) {
      auto j = report_json(reports[k]);
      j["config"] = opt.configs[k];
      out.push_back(j);
    }
    std::cout << (out.size() == 1 ? out[0] : out).dump(2) << "\n";
  } else {
    for (std::size_t k = 0; k < reports.size(); ++k) report_text(std::cout, opt.configs[k], reports[k]);
  }
  return ok ? kOk : kSuite;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit local reciprocity for tame abelian extensions of F_q((t))"};
  app.require_subcommand(1);
  // Lets global flags follow the subcommand; must precede add_subcommand.
  app.fallthrough();
  Options opt;
  app.add_flag("--json", opt.json, "Machine-readable output");
  app.add_option("--precision", opt.precision, "Series precision (overrides the config and LOCREC_PRECISION)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "Random seed (overrides the config)");

  const auto single = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", opt.configs, "Extension descriptor ('-' for stdin)")->required()->expected(1);
    return sub;
  };
  auto* validate = single("validate", "Construct the extension and check its basic invariants");
  auto* galois = single("galois", "Galois group table, structure and ramification filtration");
  auto* recip = single("recip", "Reciprocity map on coset representatives, closed form against search");
  auto* normg = single("norm-group", "Presentation of K*/N(L*)");
  auto* hasse = single("hasse", "Hasse invariants for one character");
  hasse->add_option("--character", opt.character, "Index into the character list");
  auto* check = app.add_subcommand("check", "Run the full property suite");
  check->add_option("configs", opt.configs, "Extension descriptors")->required();
  check->add_option("--jobs", opt.jobs, "Parallel suites (default: hardware threads)");
  check->add_option("--kernel-samples", opt.suite.kernel_samples);
  check->add_option("--unit-samples", opt.suite.unit_samples);
  check->add_option("--algebra-samples", opt.suite.algebra_samples);
  check->add_option("--root-samples", opt.suite.root_samples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kIo;
  }

  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (galois->parsed()) return cmd_galois(opt);
    if (recip->parsed()) return cmd_recip(opt);
    if (normg->parsed()) return cmd_norm_group(opt);
    if (hasse->parsed()) return cmd_hasse(opt);
    if (check->parsed()) return cmd_check(opt);
  } catch (const ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kIo;
  } catch (const ValidationFailure& ex) {
    std::cerr << "invalid extension: " << ex.what() << "\n";
    return kValidation;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kSuite;
  }
  return kIo;
}
