#include <multideriv/multideriv.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace multideriv;

namespace {

enum class Format { Pretty, Json, Latex };

struct Common {
  int h = 4;
  int a1 = 0;
  int a2 = 0;
  Format format = Format::Pretty;
  bool orbit_swap = false;
  int pole_cap = -1;
  int max_h = 30;
};

// exit codes
constexpr int kOk = 0, kFailed = 1, kInvalid = 2, kInternal = 3;

class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int pole_cap(const Common& c) { return c.pole_cap >= 0 ? c.pole_cap : Engine::default_pole_cap(); }

Engine make_engine(const Common& c) { return Engine(Arrangement::build(c.h, c.max_h), pole_cap(c)); }

void add_format(CLI::App* app, Common& c, bool latex = true) {
  std::map<std::string, Format> names{{"pretty", Format::Pretty}, {"json", Format::Json}};
  if (latex) names["latex"] = Format::Latex;
  app->add_option("--format", c.format, "Output format")->transform(CLI::CheckedTransformer(names, CLI::ignore_case));
}

void add_h(CLI::App* app, Common& c) {
  app->add_option("--h", c.h, "Coxeter number (even, at least 4)")->required();
  app->add_option("--max-h", c.max_h, "Largest accepted h")->capture_default_str();
}

int cmd_basis(const Common& c) {
  Engine eng = make_engine(c);
  auto cert = construct(eng, c.a1, c.a2, c.orbit_swap);
  switch (c.format) {
    case Format::Json: std::cout << to_json(cert).dump(2) << "\n"; break;
    case Format::Latex: std::cout << latex_certificate(cert); break;
    case Format::Pretty: std::cout << pretty_certificate(cert); break;
  }
  return cert.verified ? kOk : kFailed;
}

int cmd_verify(const Common& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  Multiplicity m{c.a1, c.a2};
  if (c.orbit_swap) std::swap(m.a1, m.a2);
  if (doc.is_object()) {
    if (doc.contains("h") && doc["h"] != c.h) throw InvalidInput("file is for h = " + doc["h"].dump());
    if (doc.contains("a1") && doc.contains("a2") && (doc["a1"] != m.a1 || doc["a2"] != m.a2)) {
      throw InvalidInput("file is for (" + doc["a1"].dump() + ", " + doc["a2"].dump() + ")");
    }
  }
  const auto& arr = Arrangement::build(c.h, c.max_h);
  std::pair<Derivation<Rational>, Derivation<Rational>> basis;
  try {
    basis = basis_from_json(arr, doc);
  } catch (const Json::exception& e) {
    throw InvalidInput(e.what());
  }
  auto r1 = membership(basis.first, m), r2 = membership(basis.second, m);
  auto res = saito_check(basis.first, basis.second, m);
  std::string reason = res.reason;
  // a certificate must also reproduce its own exponents and scalar
  if (res && doc.is_object() && doc.contains("exponents") && res.exponents) {
    Json ex = {res.exponents->first, res.exponents->second};
    if (doc["exponents"] != ex) {
      res.ok = false;
      reason = "stated exponents " + doc["exponents"].dump() + " differ from " + ex.dump();
    }
  }
  if (res && doc.is_object() && doc.contains("saito_scalar")) {
    Json sc = to_json(FieldScalar(arr.field(), res.scalar));
    if (doc["saito_scalar"] != sc) {
      res.ok = false;
      reason = "stated saito_scalar " + doc["saito_scalar"].dump() + " differs from " + sc.dump();
    }
  }
  if (c.format == Format::Json) {
    Json out{{"h", c.h}, {"a1", m.a1}, {"a2", m.a2}, {"verified", res.ok}};
    out["membership"] = {r1.str(), r2.str()};
    out["exponents"] = res.exponents ? Json{res.exponents->first, res.exponents->second} : Json(nullptr);
    out["saito_scalar"] = res.ok ? to_json(FieldScalar(arr.field(), res.scalar)) : Json(nullptr);
    if (!res.ok) out["reason"] = reason;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "h = " << c.h << ", (a1, a2) = " << m.str() << "\n";
    std::cout << "theta1: " << r1.str() << "\n";
    std::cout << "theta2: " << r2.str() << "\n";
    if (res.exponents) std::cout << "pdeg: " << res.exponents->first << ", " << res.exponents->second << "\n";
    if (res) {
      std::cout << "det = " << res.scalar << " * Q1^" << m.a1 << " Q2^" << m.a2 << "\nverified\n";
    } else {
      std::cout << "not verified: " << reason << "\n";
    }
  }
  return res.ok ? kOk : kFailed;
}

struct Cell {
  int a1, a2;
  std::pair<int, int> built, closed;
  bool ok() const { return built == closed; }
};

std::vector<Cell> build_grid(const Common& c, int range) {
  Engine eng = make_engine(c);
  const int side = 2 * range + 1;
  std::vector<Cell> cells(side * side);
  parallel_for(cells.size(), 0, [&](std::size_t i) {
    const int a1 = static_cast<int>(i) / side - range, a2 = static_cast<int>(i) % side - range;
    auto cert = construct(eng, a1, a2, c.orbit_swap);
    cells[i] = {a1, a2, cert.exponents, table4_exponents(c.h, cert.m.a1, cert.m.a2)};
  });
  return cells;
}

int cmd_exponents(const Common& c, int range, const std::string& layout) {
  if (range < 0) throw InvalidInput("--range must be nonnegative");
  if (layout == "bases") {
    Engine eng = make_engine(c);
    std::vector<BasisCertificate> certs;
    bool ok = true;
    for (const auto& m : unit_box_order()) {
      certs.push_back(construct(eng, m.a1, m.a2));
      ok = ok && certs.back().exponents == table4_exponents(c.h, m.a1, m.a2);
    }
    if (c.format == Format::Json) {
      Json rows = Json::array();
      for (const auto& cert : certs) {
        rows.push_back({{"a1", cert.m.a1}, {"a2", cert.m.a2}, {"basis", {seed_name(cert.plan.theta[0]), seed_name(cert.plan.theta[1])}},
                        {"exponents", {cert.exponents.first, cert.exponents.second}}, {"difference", cert.exponents.second - cert.exponents.first}});
      }
      std::cout << Json{{"h", c.h}, {"layout", "bases"}, {"rows", rows}}.dump(2) << "\n";
    } else {
      std::cout << unit_box_text(c.h, certs, c.format == Format::Latex);
    }
    return ok ? kOk : kFailed;
  }
  auto cells = build_grid(c, range);
  bool ok = true;
  for (const auto& cell : cells) ok = ok && cell.ok();
  if (layout == "parity") {
    ParityTally tally;
    for (const auto& cell : cells) {
      const int r = parity_row(cell.a1, cell.a2);
      ++tally.cells[r];
      if (cell.ok()) ++tally.agree[r];
      const int d = cell.built.second - cell.built.first;
      if (tally.difference[r] && *tally.difference[r] != d) tally.difference_constant[r] = false;
      tally.difference[r] = tally.difference[r].value_or(d);
    }
    if (c.format == Format::Json) {
      Json rows = Json::array();
      for (int r = 0; r < 5; ++r) {
        rows.push_back({{"row", r}, {"cells", tally.cells[r]}, {"agree", tally.agree[r]},
                        {"difference", tally.difference_constant[r] && tally.difference[r] ? Json(*tally.difference[r]) : Json(nullptr)}});
      }
      std::cout << Json{{"h", c.h}, {"layout", "parity"}, {"range", range}, {"rows", rows}}.dump(2) << "\n";
    } else {
      std::cout << parity_table_text(c.h, tally, c.format == Format::Latex);
    }
    return ok ? kOk : kFailed;
  }
  if (c.format == Format::Json) {
    Json out{{"h", c.h}, {"range", range}, {"agree", ok}};
    if (c.orbit_swap) out["orbit_swap"] = true;
    out["cells"] = Json::array();
    for (const auto& cell : cells) {
      out["cells"].push_back({{"a1", cell.a1}, {"a2", cell.a2}, {"constructed", {cell.built.first, cell.built.second}},
                              {"closed_form", {cell.closed.first, cell.closed.second}}, {"agree", cell.ok()}});
    }
    std::cout << out.dump(2) << "\n";
  } else if (c.format == Format::Latex) {
    const int side = 2 * range + 1;
    std::cout << "% exponents of (A, (a1, a2)) for h = " << c.h << "; rows a1, columns a2\n";
    std::cout << "\\begin{tabular}{|c|" << std::string(side, 'c') << "|}\n\\hline\n$a_{1} \\backslash a_{2}$";
    for (int a2 = -range; a2 <= range; ++a2) std::cout << " & $" << a2 << "$";
    std::cout << " \\\\\n\\hline\n";
    for (int i = 0; i < side; ++i) {
      std::cout << "$" << i - range << "$";
      for (int j = 0; j < side; ++j) {
        const auto& cell = cells[i * side + j];
        std::cout << " & $" << cell.built.first << ", " << cell.built.second << "$";
      }
      std::cout << " \\\\\n";
    }
    std::cout << "\\hline\n\\end{tabular}\n";
  } else {
    std::cout << "h = " << c.h << ": constructed exponents (a mark ! flags disagreement with the closed form)\n";
    std::cout << std::setw(8) << "a1\\a2";
    for (int a2 = -range; a2 <= range; ++a2) std::cout << std::setw(10) << a2;
    std::cout << "\n";
    const int side = 2 * range + 1;
    for (int i = 0; i < side; ++i) {
      std::cout << std::setw(8) << i - range;
      for (int j = 0; j < side; ++j) {
        const auto& cell = cells[i * side + j];
        std::string s = std::to_string(cell.built.first) + "," + std::to_string(cell.built.second) + (cell.ok() ? "" : "!");
        std::cout << std::setw(10) << s;
      }
      std::cout << "\n";
    }
    std::cout << (ok ? "all cells agree with the closed form\n" : "some cells disagree with the closed form\n");
  }
  return ok ? kOk : kFailed;
}

int cmd_show(const Common& c) {
  const auto& a = Arrangement::build(c.h, c.max_h);
  if (c.format == Format::Json) {
    Json lines = Json::array();
    for (int j = 0; j < c.h; ++j) {
      const auto& l = a.lines()[j];
      lines.push_back({{"j", j}, {"orbit", Arrangement::orbit_of(j)}, {"a", to_json(l.a)}, {"b", to_json(l.b)},
                       {"numeric", {l.a.to_complex().real(), l.b.to_complex().real()}}});
    }
    Json out{{"h", c.h}, {"two_h", 2 * c.h}, {"field_degree", a.field().degree()}, {"q1", to_json(a.q1())}, {"q2", to_json(a.q2())},
             {"q", to_json(a.q())}, {"p1", to_json(a.p1())}, {"p2", to_json(a.p2())}, {"group_order", a.group().size()}, {"lines", lines}};
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  if (c.format == Format::Latex) {
    std::cout << "\\begin{align*}\n";
    std::cout << "Q_{1} &= " << latex_poly(a.q1()) << ", \\\\\n";
    std::cout << "Q_{2} &= " << latex_poly(a.q2()) << ", \\\\\n";
    std::cout << "P_{1} &= " << latex_poly(a.p1()) << ", \\\\\n";
    std::cout << "P_{2} &= " << latex_poly(a.p2()) << "\n";
    std::cout << "\\end{align*}\n";
    return kOk;
  }
  std::cout << "I2(" << c.h << "): " << c.h << " lines, |W| = " << a.group().size() << ", coefficients in Q(zeta_" << 2 * c.h << ") of degree "
            << a.field().degree() << "\n";
  std::cout << "Q1 = " << a.q1().str() << "\n";
  std::cout << "Q2 = " << a.q2().str() << "\n";
  std::cout << "P1 = " << a.p1().str() << "\n";
  std::cout << "P2 = " << a.p2().str() << "\n";
  std::cout << "lines alpha_j = a x1 + b x2:\n";
  for (int j = 0; j < c.h; ++j) {
    const auto& l = a.lines()[j];
    char buf[64];
    std::snprintf(buf, sizeof buf, "% .6f x1 + % .6f x2", l.a.to_complex().real(), l.b.to_complex().real());
    std::cout << "  j=" << j << " orbit " << Arrangement::orbit_of(j) << ": " << buf << "\n";
  }
  return kOk;
}

int cmd_selftest(const Common& c, bool deep, unsigned threads) {
  SelftestOptions opts;
  opts.deep = deep;
  opts.max_h = std::max(c.max_h, 16);
  opts.pole_cap = pole_cap(c);
  opts.threads = threads;
  Selftest suite(opts);
  const bool json = c.format == Format::Json;
  auto results = suite.run_all([&](const CriterionResult& r) {
    if (!json) std::cout << r.line() << std::endl;
  });
  std::vector<std::string> report;
  if (deep) report = suite.variant_report();
  bool ok = true;
  for (const auto& r : results) ok = ok && r.ok;
  if (json) {
    Json out{{"passed", ok}, {"criteria", Json::array()}};
    for (const auto& r : results) out["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"ok", r.ok}, {"detail", r.detail}});
    if (deep) out["variant_report"] = report;
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& line : report) std::cout << "deep: " << line << "\n";
    std::cout << (ok ? "all criteria passed" : "some criteria failed") << "\n";
  }
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bases for multi-derivation modules of dihedral arrangements"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Common c;
  std::string input;
  int range = 3;
  std::string layout = "grid";
  bool deep = false;
  unsigned threads = 0;

  auto* basis = app.add_subcommand("basis", "Construct and certify a basis of D(A, (a1, a2))");
  add_h(basis, c);
  basis->add_option("--a1", c.a1)->required();
  basis->add_option("--a2", c.a2)->required();
  basis->add_flag("--orbit-swap", c.orbit_swap, "Exchange the labels of the two orbits");
  basis->add_option("--pole-cap", c.pole_cap, "Retry cap for the inversion ansatz")->check(CLI::NonNegativeNumber);
  add_format(basis, c);

  auto* verify = app.add_subcommand("verify", "Check a candidate basis from a JSON file");
  add_h(verify, c);
  verify->add_option("--a1", c.a1)->required();
  verify->add_option("--a2", c.a2)->required();
  verify->add_option("--input", input, "Certificate, {\"basis\": [...]} or a two-element array")->required();
  verify->add_flag("--orbit-swap", c.orbit_swap);
  add_format(verify, c, false);

  auto* exps = app.add_subcommand("exponents", "Constructed exponents next to the closed form");
  add_h(exps, c);
  exps->add_option("--range", range, "Grid half-width R: |a1|, |a2| <= R")->capture_default_str();
  exps->add_option("--layout", layout, "grid, bases (unit box with seed names) or parity (closed-form rows)")
      ->check(CLI::IsMember({"grid", "bases", "parity"}))
      ->capture_default_str();
  exps->add_flag("--orbit-swap", c.orbit_swap);
  exps->add_option("--pole-cap", c.pole_cap)->check(CLI::NonNegativeNumber);
  add_format(exps, c);

  auto* show = app.add_subcommand("show", "Arrangement data");
  add_h(show, c);
  add_format(show, c);

  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
  self->add_flag("--deep", deep, "Add larger sweeps and the E1/E2 comparison");
  self->add_option("--threads", threads, "Worker threads (0: hardware)");
  self->add_option("--pole-cap", c.pole_cap)->check(CLI::NonNegativeNumber);
  add_format(self, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*basis) return cmd_basis(c);
    if (*verify) return cmd_verify(c, input);
    if (*exps) return cmd_exponents(c, range, layout);
    if (*show) return cmd_show(c);
    if (*self) return cmd_selftest(c, deep, threads);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInvalid;
}
