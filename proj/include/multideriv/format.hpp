#pragma once

// Plain-text and LaTeX renderings of certificates and of the two exponent tables.

#include <multideriv/basis.hpp>

#include <array>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace multideriv {

inline const char* seed_latex(SeedTag t) {
  switch (t) {
    case SeedTag::E: return "E";
    case SeedTag::GradP2: return "I^{*}(dP_{2})";
    case SeedTag::D: return "D";
    case SeedTag::DlogQ: return "I^{*}(dQ/Q)";
    case SeedTag::DlogQ1: return "I^{*}(dQ_{1}/Q_{1})";
    case SeedTag::DlogQ2: return "I^{*}(dQ_{2}/Q_{2})";
    case SeedTag::GradQ1: return "I^{*}(dQ_{1})";
    case SeedTag::GradQ2: return "I^{*}(dQ_{2})";
    case SeedTag::D1: return "D_{1}";
    case SeedTag::D2: return "D_{2}";
    case SeedTag::Dx1: return "\\partial_{x_{1}}";
    case SeedTag::Dx2: return "\\partial_{x_{2}}";
  }
  return "?";
}

inline std::string latex_rational(const Rational& q) {
  if (q.is_integer()) return q.short_str();
  std::string sign = q.sign() < 0 ? "-" : "";
  Rational a = q.sign() < 0 ? -q : q;
  return sign + "\\frac{" + a.numerator().get_str() + "}{" + a.denominator().get_str() + "}";
}

inline std::string latex_poly(const Poly2<Rational>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational a = c;
    if (a.sign() < 0) {
      out += first ? "-" : " - ";
      a = -a;
    } else if (!first) {
      out += " + ";
    }
    first = false;
    std::string vars;
    auto var = [&](const char* x, int e) {
      if (e == 0) return;
      vars += x;
      if (e > 1) vars += "^{" + std::to_string(e) + "}";
    };
    var("x_{1}", m.i);
    var("x_{2}", m.j);
    if (vars.empty()) {
      out += latex_rational(a);
    } else {
      if (!a.is_one()) out += latex_rational(a) + " ";
      out += vars;
    }
  }
  return out;
}

inline std::string latex_ratfn(const RatFn<Rational>& f) {
  if (f.is_polynomial()) return latex_poly(f.num());
  std::string den;
  auto part = [&](const char* q, int e) {
    if (e == 0) return;
    if (!den.empty()) den += " ";
    den += q;
    if (e > 1) den += "^{" + std::to_string(e) + "}";
  };
  part("Q_{1}", f.den_q1());
  part("Q_{2}", f.den_q2());
  return "\\frac{" + latex_poly(f.num()) + "}{" + den + "}";
}

inline std::string latex_derivation(const Derivation<Rational>& t) {
  if (t.is_zero()) return "0";
  std::string out;
  if (!t.c1().is_zero()) out += "\\left(" + latex_ratfn(t.c1()) + "\\right)\\partial_{x_{1}}";
  if (!t.c2().is_zero()) out += (out.empty() ? "" : " + ") + ("\\left(" + latex_ratfn(t.c2()) + "\\right)\\partial_{x_{2}}");
  return out;
}

inline std::string pretty_certificate(const BasisCertificate& c) {
  std::ostringstream os;
  os << "h = " << c.h << ", (a1, a2) = " << c.m.str() << (c.orbit_swap ? "  [orbit labels swapped]" : "") << "\n";
  os << "case: " << c.plan.str() << "\n";
  os << "theta1 = " << c.basis.first.str() << "\n";
  os << "theta2 = " << c.basis.second.str() << "\n";
  os << "exponents: " << c.exponents.first << ", " << c.exponents.second << "\n";
  os << "saito scalar: " << c.saito_scalar << "\n";
  os << "verified: " << (c.verified ? "yes" : "no") << "\n";
  os << "trace:\n";
  for (const auto& line : c.trace) os << "  " << line << "\n";
  return os.str();
}

inline std::string latex_certificate(const BasisCertificate& c) {
  std::ostringstream os;
  os << "% h = " << c.h << ", (a_1, a_2) = " << c.m.str() << ", " << case_kind_name(c.plan.kind) << " " << c.plan.row() << "\n";
  os << "\\begin{align*}\n";
  os << "\\theta_{1} &= " << latex_derivation(c.basis.first) << ", \\\\\n";
  os << "\\theta_{2} &= " << latex_derivation(c.basis.second) << ", \\\\\n";
  os << "\\det M(\\theta_{1}, \\theta_{2}) &= " << latex_rational(c.saito_scalar) << " \\, Q_{1}^{" << c.m.a1 << "} Q_{2}^{" << c.m.a2
     << "}, \\qquad \\text{exponents } " << c.exponents.first << ", " << c.exponents.second << "\n";
  os << "\\end{align*}\n";
  return os.str();
}

/// The nine multiplicities with |a1|, |a2| <= 1, in display order.
inline const std::vector<Multiplicity>& unit_box_order() {
  static const std::vector<Multiplicity> order{{1, 1}, {1, 0}, {0, 1}, {1, -1}, {0, 0}, {-1, 1}, {0, -1}, {-1, 0}, {-1, -1}};
  return order;
}

inline std::string unit_box_text(int h, const std::vector<BasisCertificate>& certs, bool latex) {
  std::ostringstream os;
  if (latex) {
    os << "\\begin{tabular}{|c|c|c|c|}\n\\hline\n";
    os << "$(a_{1}, a_{2})$ & basis for $D(\\mathcal{A}, (a_{1}, a_{2}))$ & exponents of $(\\mathcal{A}, (a_{1}, a_{2}))$ & their difference \\\\\n\\hline\n";
  } else {
    os << "h = " << h << "\n";
    os << "(a1, a2)   basis                        exponents   difference\n";
  }
  for (const auto& c : certs) {
    const auto [e1, e2] = c.exponents;
    if (latex) {
      os << "$(" << c.m.a1 << ", " << c.m.a2 << ")$ & $" << seed_latex(c.plan.theta[0]) << ", " << seed_latex(c.plan.theta[1]) << "$ & $" << e1
         << ", " << e2 << "$ & $" << e2 - e1 << "$ \\\\\n\\hline\n";
    } else {
      std::string names = std::string(seed_name(c.plan.theta[0])) + ", " + seed_name(c.plan.theta[1]);
      std::string ex = std::to_string(e1) + ", " + std::to_string(e2);
      os << c.m.str() << std::string(11 - std::min<std::size_t>(10, c.m.str().size()), ' ') << names
         << std::string(29 - std::min<std::size_t>(28, names.size()), ' ') << ex << std::string(12 - std::min<std::size_t>(11, ex.size()), ' ')
         << e2 - e1 << "\n";
    }
  }
  if (latex) os << "\\end{tabular}\n";
  return os.str();
}

/// Parity class of (a1, a2) as used by the closed-form exponent table.
inline int parity_row(int a1, int a2) {
  const bool o1 = a1 % 2 != 0, o2 = a2 % 2 != 0;
  if (o1 && o2) return mod4(a1 - a2) == 0 ? 0 : 1;
  if (o1) return 2;
  if (o2) return 3;
  return 4;
}

struct ParityTally {
  std::array<int, 5> cells{};
  std::array<int, 5> agree{};
  std::array<std::optional<int>, 5> difference;  // the common e2 - e1, if constant across the row
  std::array<bool, 5> difference_constant{true, true, true, true, true};
};

inline std::string parity_table_text(int h, const ParityTally& tally, bool latex) {
  static const char* parity[5][3] = {{"odd", "odd", "0 (mod 4)"}, {"odd", "odd", "2 (mod 4)"}, {"odd", "even", ""}, {"even", "odd", ""}, {"even", "even", ""}};
  static const char* formula_text[5] = {"(a1+a2-2)h/4+1, (a1+a2+2)h/4-1", "(a1+a2)h/4+1, (a1+a2)h/4-1", "(a1+a2-1)h/4+1, (a1+a2+1)h/4-1",
                                        "(a1+a2-1)h/4+1, (a1+a2+1)h/4-1", "(a1+a2)h/4, (a1+a2)h/4"};
  static const char* formula_latex[5] = {
      "\\frac{(a_{1}+a_{2}-2)h}{4}+1, \\frac{(a_{1}+a_{2}+2)h}{4}-1", "\\frac{(a_{1}+a_{2})h}{4}+1, \\frac{(a_{1}+a_{2})h}{4}-1",
      "\\frac{(a_{1}+a_{2}-1)h}{4}+1, \\frac{(a_{1}+a_{2}+1)h}{4}-1", "\\frac{(a_{1}+a_{2}-1)h}{4}+1, \\frac{(a_{1}+a_{2}+1)h}{4}-1",
      "\\frac{(a_{1}+a_{2})h}{4}, \\frac{(a_{1}+a_{2})h}{4}"};
  std::ostringstream os;
  if (latex) {
    os << "% h = " << h << ": constructed exponents agree with the closed form in the counted cells\n";
    os << "\\begin{tabular}{|c|c|c|c|c|}\n\\hline\n";
    os << "$a_{1}$ & $a_{2}$ & $a_{1} - a_{2}$ & exponents of $(\\mathcal{A}, (a_{1}, a_{2}))$ & their difference \\\\\n\\hline\n";
  } else {
    os << "h = " << h << "\n";
  }
  for (int r = 0; r < 5; ++r) {
    std::string diff = tally.difference[r] && tally.difference_constant[r] ? std::to_string(*tally.difference[r]) : "varies";
    if (latex) {
      std::string cong = *parity[r][2] ? std::string("$\\equiv ") + parity[r][2][0] + " \\,(\\mbox{\\rm mod~} 4)$" : "";
      os << parity[r][0] << " & " << parity[r][1] << " & " << cong << " & $" << formula_latex[r] << "$ & $" << diff << "$ \\\\\n\\hline\n";
    } else {
      os << parity[r][0] << " " << parity[r][1] << (*parity[r][2] ? std::string(" a1-a2 = ") + parity[r][2] : "") << ": " << formula_text[r]
         << "  difference " << diff << "  (" << tally.agree[r] << "/" << tally.cells[r] << " constructed cells agree)\n";
    }
  }
  if (latex) os << "\\end{tabular}\n";
  return os.str();
}

}  // namespace multideriv
