#include "vir/session.hpp"

#include "vir/classifier.hpp"
#include "vir/subalgebra.hpp"
#include "vir/suites.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace vir {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string join_from(const std::vector<std::string>& toks, size_t start) {
  std::string out;
  for (size_t i = start; i < toks.size(); ++i) {
    if (i > start) out += " ";
    out += toks[i];
  }
  return out;
}

// Polynomial in t over Q, same term grammar as scalars but with unbounded
// powers; used for minimal polynomials before the field exists.
std::vector<Rat> parse_poly(const std::string& text) {
  std::vector<Rat> coeffs;
  auto bump = [&](size_t k, const Rat& c) {
    if (coeffs.size() <= k) coeffs.resize(k + 1, Rat(0));
    coeffs[k] += c;
  };
  size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto parse_uint = [&]() -> Int {
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) fail(Errc::ParseError, "expected integer in polynomial");
    return Int(text.substr(start, pos - start), 10);
  };
  bool first = true;
  skip();
  while (pos < text.size()) {
    bool neg = false;
    if (!first || text[pos] == '+' || text[pos] == '-') {
      if (text[pos] == '+') {
        ++pos;
      } else if (text[pos] == '-') {
        neg = true;
        ++pos;
      } else if (!first) {
        fail(Errc::ParseError, "expected '+' or '-' in polynomial");
      }
    }
    skip();
    Rat coeff(1);
    bool have_coeff = false;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      Int num = parse_uint();
      coeff = Rat(num);
      if (pos < text.size() && text[pos] == '/') {
        ++pos;
        Int den = parse_uint();
        if (den == 0) fail(Errc::DivisionByZero, "zero denominator in polynomial");
        coeff = Rat(num, den);
        coeff.canonicalize();
      }
      have_coeff = true;
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip();
      }
    }
    size_t power = 0;
    if (pos < text.size() && text[pos] == 't') {
      ++pos;
      power = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        Int e = parse_uint();
        if (!e.fits_ulong_p()) fail(Errc::ParseError, "exponent too large");
        power = e.get_ui();
      }
    } else if (!have_coeff) {
      fail(Errc::ParseError, "expected term in polynomial");
    }
    bump(power, neg ? -coeff : coeff);
    first = false;
    skip();
  }
  if (coeffs.empty()) fail(Errc::ParseError, "empty polynomial");
  return coeffs;
}

// ---------------------------------------------------------------------------
// Element / vector expression terms

struct ExprTerm {
  Scalar coeff;
  char atom = 'L'; // 'L', 'G', 'c', 'v', 'w'
  Scalar degree;   // unset for 'c'
};

// expr := ['-'] term (('+'|'-') term)* ;
// term := [scalar-product '*'] atom | scalar-product '*' atom ;
// scalar-product := factor ('*' factor)* with factor := rational | t-power |
// '(' scalar ')'; atom := L[...] | G[...] | v[...] | w[...] | c
std::vector<ExprTerm> parse_expr(const Field& f, const std::string& text,
                                 const std::string& allowed) {
  std::vector<ExprTerm> out;
  size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto err = [&](const std::string& what) {
    fail(Errc::ParseError, what + " at position " + std::to_string(pos));
  };
  auto at_atom = [&]() -> char {
    if (pos >= text.size()) return 0;
    char ch = text[pos];
    if (allowed.find(ch) == std::string::npos) return 0;
    if (ch == 'c') {
      // 'c' must not be followed by an identifier character
      if (pos + 1 < text.size() &&
          (std::isalnum(static_cast<unsigned char>(text[pos + 1])) || text[pos + 1] == '['))
        return 0;
      return 'c';
    }
    if (pos + 1 < text.size() && text[pos + 1] == '[') return ch;
    return 0;
  };
  auto parse_bracket_scalar = [&]() -> Scalar {
    // caller consumed the atom letter; expect [ ... ]
    if (pos >= text.size() || text[pos] != '[') err("expected '['");
    ++pos;
    size_t close = text.find(']', pos);
    if (close == std::string::npos) err("missing ']'");
    Scalar s = f.parse(text.substr(pos, close - pos));
    pos = close + 1;
    return s;
  };
  auto parse_scalar_factor = [&]() -> Scalar {
    skip();
    if (pos < text.size() && text[pos] == '(') {
      size_t close = text.find(')', pos);
      if (close == std::string::npos) err("missing ')'");
      Scalar s = f.parse(text.substr(pos + 1, close - pos - 1));
      pos = close + 1;
      return s;
    }
    // rational or t-power; delegate to the scalar parser over the token
    size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/' ||
            text[pos] == 't' || text[pos] == '^'))
      ++pos;
    if (pos == start) err("expected coefficient");
    return f.parse(text.substr(start, pos - start));
  };

  skip();
  if (pos >= text.size()) err("empty expression");
  bool first = true;
  while (true) {
    skip();
    if (pos >= text.size()) break;
    bool neg = false;
    if (!first) {
      if (text[pos] == '+') {
        ++pos;
      } else if (text[pos] == '-') {
        neg = true;
        ++pos;
      } else {
        err("expected '+' or '-'");
      }
      skip();
    } else if (text[pos] == '-') {
      neg = true;
      ++pos;
      skip();
    }
    ExprTerm term;
    term.coeff = f.one();
    bool have_coeff = false;
    char atom = at_atom();
    while (!atom) {
      term.coeff = term.coeff * parse_scalar_factor();
      have_coeff = true;
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip();
        atom = at_atom();
        if (atom) break;
        continue;
      }
      atom = at_atom();
      break;
    }
    if (!atom) {
      if (!have_coeff) err("expected term");
      err("expected basis symbol (one of '" + allowed + "')");
    }
    term.atom = atom;
    ++pos; // consume the atom letter
    if (atom != 'c') term.degree = parse_bracket_scalar();
    if (neg) term.coeff = -term.coeff;
    out.push_back(std::move(term));
    first = false;
    skip();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Statements

enum class St {
  Field, Mode, LatticeDecl, CosetDecl, HomDecl, ElemDecl, SElemDecl, ModuleDecl, SAlgDecl,
  SModuleDecl, TableDecl,
  Bracket, Jacobi, Grade, AutoChi, AutoScale, Member, RankCmd, ScalerCmd, HomEval, Expad,
  Pair2, Closure, Span, Act, ActRes, Substruct, Iso, Restrict, FitAb, SBracket, SJacobi,
  SAct, SActRes, ExtCheck, Classify,
};

struct Stmt {
  int line = 0;
  St kind;
  std::vector<std::string> toks; // full token list including the keyword
};

const std::map<std::string, St>& keyword_map() {
  static const std::map<std::string, St> m = {
      {"field", St::Field},       {"mode", St::Mode},         {"lattice", St::LatticeDecl},
      {"coset", St::CosetDecl},   {"hom", St::HomDecl},       {"elem", St::ElemDecl},
      {"selem", St::SElemDecl},   {"module", St::ModuleDecl}, {"salg", St::SAlgDecl},
      {"smodule", St::SModuleDecl}, {"table", St::TableDecl},
      {"bracket", St::Bracket},   {"jacobi", St::Jacobi},     {"grade", St::Grade},
      {"autochi", St::AutoChi},   {"autoscale", St::AutoScale}, {"member", St::Member},
      {"rank", St::RankCmd},      {"scaler", St::ScalerCmd},  {"homeval", St::HomEval},
      {"expad", St::Expad},       {"pair2", St::Pair2},       {"closure", St::Closure},
      {"span", St::Span},         {"act", St::Act},           {"actres", St::ActRes},
      {"substruct", St::Substruct}, {"iso", St::Iso},         {"restrict", St::Restrict},
      {"fitab", St::FitAb},       {"sbracket", St::SBracket}, {"sjacobi", St::SJacobi},
      {"sact", St::SAct},         {"sactres", St::SActRes},   {"extcheck", St::ExtCheck},
      {"classify", St::Classify},
  };
  return m;
}

[[noreturn]] void fail_at(int line, Errc code, const std::string& msg) {
  fail(code, "line " + std::to_string(line) + ": " + msg);
}

std::string opt_value(const std::vector<std::string>& toks, const std::string& keyEq) {
  for (const auto& t : toks)
    if (t.rfind(keyEq, 0) == 0) return t.substr(keyEq.size());
  return {};
}

} // namespace

// ---------------------------------------------------------------------------

struct Session::Impl {
  std::string base_dir;
  Field field;
  bool has_field = false;
  std::vector<Stmt> stmts;
};

Session::Session() : impl_(new Impl) {}
Session::Session(Session&&) noexcept = default;
Session& Session::operator=(Session&&) noexcept = default;
Session::~Session() = default;

namespace {

// Name table used during both parse (types only) and run (values).
struct NameKinds {
  std::map<std::string, char> kinds; // l c h e s m a M t
  void declare(int line, const std::string& name, char kind) {
    if (keyword_map().count(name))
      fail_at(line, Errc::RedefinedName, "'" + name + "' is a reserved word");
    auto [it, fresh] = kinds.emplace(name, kind);
    if (!fresh) fail_at(line, Errc::RedefinedName, "'" + name + "' already declared");
  }
  char lookup(const std::string& name) const {
    auto it = kinds.find(name);
    return it == kinds.end() ? 0 : it->second;
  }
  void require(int line, const std::string& name, char kind, const char* what) {
    char k = lookup(name);
    if (k == 0) fail_at(line, Errc::UndefinedName, "'" + name + "' is not declared");
    if (k != kind)
      fail_at(line, Errc::UndefinedName, "'" + name + "' is not a " + std::string(what));
  }
};

} // namespace

Session Session::parse(const std::string& text, std::string base_dir) {
  Session s;
  s.impl_->base_dir = std::move(base_dir);
  NameKinds names;
  bool has_lattice = false, has_salg = false;

  std::istringstream is(text);
  std::string raw;
  int line = 0;
  auto need = [&](bool cond, const std::string& msg) {
    if (!cond) fail_at(line, Errc::ParseError, msg);
  };
  auto need_field = [&] {
    if (!s.impl_->has_field) fail_at(line, Errc::UndefinedName, "no field declared");
  };
  auto check_scalar = [&](const std::string& tok) {
    need_field();
    try {
      (void)s.impl_->field.parse(tok);
    } catch (const Error& e) {
      fail_at(line, e.code(), e.what());
    }
  };
  auto check_expr = [&](const std::string& text_, const char* allowed) {
    need_field();
    try {
      (void)parse_expr(s.impl_->field, text_, allowed);
    } catch (const Error& e) {
      fail_at(line, e.code(), e.what());
    }
  };
  // element argument: declared name of the given kind, or a literal
  auto check_elem_arg = [&](const std::string& tok, char kind, const char* allowed) {
    char k = names.lookup(tok);
    if (k == kind) return;
    if (k != 0)
      fail_at(line, Errc::UndefinedName, "'" + tok + "' has the wrong type here");
    if (std::isalpha(static_cast<unsigned char>(tok[0])) && tok.find('[') == std::string::npos &&
        tok != "c")
      fail_at(line, Errc::UndefinedName, "'" + tok + "' is not declared");
    check_expr(tok, allowed);
  };

  while (std::getline(is, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto toks = split_ws(raw);
    if (toks.empty()) continue;
    auto it = keyword_map().find(toks[0]);
    if (it == keyword_map().end())
      fail_at(line, Errc::ParseError, "unknown statement '" + toks[0] + "'");
    Stmt st{line, it->second, toks};
    switch (st.kind) {
      case St::Field: {
        need(toks.size() >= 2, "field Q | field Q(t) minpoly <poly>");
        if (s.impl_->has_field) fail_at(line, Errc::RedefinedName, "field already declared");
        if (toks[1] == "Q" && toks.size() == 2) {
          s.impl_->field = Field::rationals();
        } else {
          need(toks.size() >= 4 && toks[1] == "Q(t)" && toks[2] == "minpoly",
               "field Q(t) minpoly <poly>");
          try {
            s.impl_->field = Field::extension(parse_poly(join_from(toks, 3)));
          } catch (const Error& e) {
            fail_at(line, e.code(), e.what());
          }
        }
        s.impl_->has_field = true;
        break;
      }
      case St::Mode:
        need(toks.size() == 2 && (toks[1] == "centered" || toks[1] == "centerless"),
             "mode centered|centerless");
        break;
      case St::LatticeDecl: {
        need(toks.size() >= 4 && toks[2] == "gens", "lattice <name> gens <scalar>, ...");
        for (const auto& g : split_on(join_from(toks, 3), ',')) check_scalar(g);
        names.declare(line, toks[1], 'l');
        has_lattice = true;
        break;
      }
      case St::CosetDecl: {
        need(toks.size() >= 5 && toks[3] == "+", "coset <name> <lattice> + <scalar>");
        names.require(line, toks[2], 'l', "lattice");
        check_scalar(join_from(toks, 4));
        names.declare(line, toks[1], 'c');
        break;
      }
      case St::HomDecl: {
        need(toks.size() >= 4, "hom <name> <lattice> <scalar>, ...");
        names.require(line, toks[2], 'l', "lattice");
        for (const auto& g : split_on(join_from(toks, 3), ',')) check_scalar(g);
        names.declare(line, toks[1], 'h');
        break;
      }
      case St::ElemDecl: {
        need(toks.size() >= 4 && toks[2] == "=", "elem <name> = <expr>");
        if (!has_lattice) fail_at(line, Errc::UndefinedName, "no lattice declared");
        check_expr(join_from(toks, 3), "Lc");
        names.declare(line, toks[1], 'e');
        break;
      }
      case St::SElemDecl: {
        need(toks.size() >= 4 && toks[2] == "=", "selem <name> = <expr>");
        if (!has_salg) fail_at(line, Errc::UndefinedName, "no salg declared");
        check_expr(join_from(toks, 3), "LGc");
        names.declare(line, toks[1], 's');
        break;
      }
      case St::ModuleDecl: {
        need(toks.size() >= 5, "module <name> <kind> ... over <lattice>");
        need(toks[toks.size() - 2] == "over", "module declaration needs 'over <lattice>'");
        names.require(line, toks.back(), 'l', "lattice");
        const std::string& kind = toks[2];
        need(kind == "Aab" || kind == "Aa" || kind == "Ba" || kind == "AabPrime" ||
                 kind == "TrivialLine" || kind == "PrimePlusLine",
             "unknown module kind '" + kind + "'");
        for (size_t i = 3; i + 2 < toks.size(); ++i) {
          need(toks[i].rfind("a=", 0) == 0 || toks[i].rfind("b=", 0) == 0,
               "module parameters are a=<scalar> b=<scalar>");
          check_scalar(toks[i].substr(2));
        }
        names.declare(line, toks[1], 'm');
        break;
      }
      case St::SAlgDecl: {
        need(toks.size() == 7 && toks[2].rfind("variant=", 0) == 0 && toks[3] == "over" &&
                 toks[5] == "coset",
             "salg <name> variant=<tilde|ns> over <lattice> coset <scalar>");
        std::string var = toks[2].substr(8);
        need(var == "tilde" || var == "ns", "variant must be tilde or ns");
        names.require(line, toks[4], 'l', "lattice");
        check_scalar(toks[6]);
        names.declare(line, toks[1], 'a');
        has_salg = true;
        break;
      }
      case St::SModuleDecl: {
        need(toks.size() >= 5, "smodule <name> <SAab|SAa|SBa> a=<s> [b=<s>] over <salg>");
        need(toks[toks.size() - 2] == "over", "smodule declaration needs 'over <salg>'");
        names.require(line, toks.back(), 'a', "salg");
        need(toks[2] == "SAab" || toks[2] == "SAa" || toks[2] == "SBa",
             "unknown super module kind '" + toks[2] + "'");
        for (size_t i = 3; i + 2 < toks.size(); ++i) {
          need(toks[i].rfind("a=", 0) == 0 || toks[i].rfind("b=", 0) == 0,
               "smodule parameters are a=<scalar> b=<scalar>");
          check_scalar(toks[i].substr(2));
        }
        names.declare(line, toks[1], 'M');
        break;
      }
      case St::TableDecl:
        need(toks.size() == 4 && toks[2] == "file", "table <name> file <path>");
        need_field();
        names.declare(line, toks[1], 't');
        break;
      case St::Bracket:
        need(toks.size() == 3 || (toks.size() == 5 && toks[3] == "as"),
             "bracket <elem> <elem> [as <name>]");
        check_elem_arg(toks[1], 'e', "Lc");
        check_elem_arg(toks[2], 'e', "Lc");
        if (toks.size() == 5) names.declare(line, toks[4], 'e');
        break;
      case St::Jacobi:
        need(toks.size() == 4, "jacobi <elem> <elem> <elem>");
        for (int i = 1; i <= 3; ++i) check_elem_arg(toks[i], 'e', "Lc");
        break;
      case St::Grade:
        need(toks.size() == 2, "grade <elem>");
        check_elem_arg(toks[1], 'e', "Lc");
        break;
      case St::AutoChi:
        need(toks.size() == 3, "autochi <hom> <elem>");
        names.require(line, toks[1], 'h', "hom");
        check_elem_arg(toks[2], 'e', "Lc");
        break;
      case St::AutoScale:
        need(toks.size() == 3, "autoscale <scalar> <elem>");
        check_scalar(toks[1]);
        check_elem_arg(toks[2], 'e', "Lc");
        break;
      case St::Member:
        need(toks.size() == 3, "member <lattice> <scalar>");
        names.require(line, toks[1], 'l', "lattice");
        check_scalar(toks[2]);
        break;
      case St::RankCmd:
        need(toks.size() >= 2, "rank <scalar> ...");
        for (size_t i = 1; i < toks.size(); ++i) check_scalar(toks[i]);
        break;
      case St::ScalerCmd:
        need(toks.size() == 3, "scaler <lattice> <scalar>");
        names.require(line, toks[1], 'l', "lattice");
        check_scalar(toks[2]);
        break;
      case St::HomEval:
        need(toks.size() == 3, "homeval <hom> <scalar>");
        names.require(line, toks[1], 'h', "hom");
        check_scalar(toks[2]);
        break;
      case St::Expad:
        need(toks.size() == 4 || (toks.size() == 6 && toks[4] == "as"),
             "expad <alpha> <x> <elem> [as <name>]");
        check_scalar(toks[1]);
        check_scalar(toks[2]);
        check_elem_arg(toks[3], 'e', "Lc");
        if (toks.size() == 6) names.declare(line, toks[5], 'e');
        break;
      case St::Pair2:
        need(toks.size() == 4, "pair2 <x> <alpha> <n>");
        check_scalar(toks[1]);
        check_scalar(toks[2]);
        break;
      case St::Closure: {
        need(toks.size() >= 3 && toks[1].rfind("cap=", 0) == 0,
             "closure cap=<k> <elem> <elem> ...");
        for (size_t i = 2; i < toks.size(); ++i) check_elem_arg(toks[i], 'e', "Lc");
        break;
      }
      case St::Span:
        need(toks.size() >= 3, "span <elem> <basis elems...>");
        for (size_t i = 1; i < toks.size(); ++i) check_elem_arg(toks[i], 'e', "Lc");
        break;
      case St::Act:
        need(toks.size() == 4, "act <module> <elem> <vector>");
        names.require(line, toks[1], 'm', "module");
        check_elem_arg(toks[2], 'e', "Lc");
        check_expr(toks[3], "v");
        break;
      case St::ActRes:
        need(toks.size() == 5, "actres <module> <elem> <elem> <vector>");
        names.require(line, toks[1], 'm', "module");
        check_elem_arg(toks[2], 'e', "Lc");
        check_elem_arg(toks[3], 'e', "Lc");
        check_expr(toks[4], "v");
        break;
      case St::Substruct:
        need(toks.size() == 2, "substruct <module>");
        names.require(line, toks[1], 'm', "module");
        break;
      case St::Iso:
        need(toks.size() == 4 && toks[3].rfind("window=", 0) == 0,
             "iso <module> <module> window=<k>");
        names.require(line, toks[1], 'm', "module");
        names.require(line, toks[2], 'm', "module");
        break;
      case St::Restrict:
        need(toks.size() == 4 && toks[3].rfind("offset=", 0) == 0,
             "restrict <module> <lattice> offset=<scalar>");
        names.require(line, toks[1], 'm', "module");
        names.require(line, toks[2], 'l', "lattice");
        check_scalar(toks[3].substr(7));
        break;
      case St::FitAb:
        need(toks.size() >= 2, "fitab <mu>:<nu>:<f> ...");
        for (size_t i = 1; i < toks.size(); ++i) {
          auto parts = split_on(toks[i], ':');
          need(parts.size() == 3, "fitab entries are <mu>:<nu>:<f>");
          for (const auto& p : parts) check_scalar(p);
        }
        break;
      case St::SBracket:
        need(toks.size() == 3, "sbracket <selem> <selem>");
        check_elem_arg(toks[1], 's', "LGc");
        check_elem_arg(toks[2], 's', "LGc");
        break;
      case St::SJacobi:
        need(toks.size() == 4, "sjacobi <selem> <selem> <selem>");
        for (int i = 1; i <= 3; ++i) check_elem_arg(toks[i], 's', "LGc");
        break;
      case St::SAct:
        need(toks.size() == 4, "sact <smodule> <selem> <vector>");
        names.require(line, toks[1], 'M', "smodule");
        check_elem_arg(toks[2], 's', "LGc");
        check_expr(toks[3], "vw");
        break;
      case St::SActRes:
        need(toks.size() == 5, "sactres <smodule> <selem> <selem> <vector>");
        names.require(line, toks[1], 'M', "smodule");
        check_elem_arg(toks[2], 's', "LGc");
        check_elem_arg(toks[3], 's', "LGc");
        check_expr(toks[4], "vw");
        break;
      case St::ExtCheck: {
        need(toks.size() >= 3 && toks[1].rfind("variant=", 0) == 0 &&
                 toks[2].rfind("window=", 0) == 0,
             "extcheck variant=<tilde|ns> window=<k> [perturb=<pt>:<val>]");
        if (!has_salg) fail_at(line, Errc::UndefinedName, "no salg declared");
        std::string var = toks[1].substr(8);
        need(var == "tilde" || var == "ns", "variant must be tilde or ns");
        if (toks.size() == 4) {
          need(toks[3].rfind("perturb=", 0) == 0, "optional flag is perturb=<pt>:<val>");
          auto parts = split_on(toks[3].substr(8), ':');
          need(parts.size() == 2, "perturb=<point>:<value>");
          check_scalar(parts[0]);
          check_scalar(parts[1]);
        } else {
          need(toks.size() == 3, "extcheck takes at most one perturb flag");
        }
        break;
      }
      case St::Classify: {
        need(toks.size() == 2, "classify <table|path>");
        char k = names.lookup(toks[1]);
        if (k != 0 && k != 't')
          fail_at(line, Errc::UndefinedName, "'" + toks[1] + "' is not a table");
        break;
      }
    }
    s.impl_->stmts.push_back(std::move(st));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

struct Env {
  Field field;
  bool centerless = false;
  std::string base_dir;
  std::map<std::string, Lattice> lattices;
  std::map<std::string, Coset> cosets;
  std::map<std::string, UnitHom> homs;
  std::map<std::string, AlgebraElement> elems;
  std::map<std::string, SuperElement> selems;
  std::map<std::string, ModuleFamily> modules;
  std::map<std::string, SuperAlgebra> salgs;
  std::map<std::string, SuperFamily> smodules;
  std::map<std::string, ActionTable> tables;
  std::string last_lattice, last_salg;
};

AlgebraElement build_elem(const Env& env, const Lattice& lat, const std::string& text) {
  auto terms = parse_expr(env.field, text, "Lc");
  AlgebraElement out = AlgebraElement::zero(lat, env.centerless);
  for (const auto& t : terms) {
    if (t.atom == 'c') {
      if (env.centerless) fail(Errc::ModeError, "'c' is undefined in centerless mode");
      out = out + t.coeff * AlgebraElement::central(lat);
    } else {
      out = out + t.coeff * AlgebraElement::L(lat, t.degree, env.centerless);
    }
  }
  return out;
}

SuperElement build_selem(const Env& env, const SuperAlgebra& alg, const std::string& text) {
  auto terms = parse_expr(env.field, text, "LGc");
  SuperElement out = SuperElement::zero(alg);
  for (const auto& t : terms) {
    if (t.atom == 'c') out = out + t.coeff * SuperElement::central(alg);
    else if (t.atom == 'L') out = out + t.coeff * SuperElement::L(alg, t.degree);
    else out = out + t.coeff * SuperElement::G(alg, t.degree);
  }
  return out;
}

ModuleVector build_vector(const Env& env, const ModuleFamily& fam, const std::string& text) {
  auto terms = parse_expr(env.field, text, "v");
  ModuleVector out(fam);
  for (const auto& t : terms) out = out + t.coeff * ModuleVector::unit(fam, t.degree);
  return out;
}

SuperModuleVector build_svector(const Env& env, const SuperFamily& fam, const std::string& text) {
  auto terms = parse_expr(env.field, text, "vw");
  SuperModuleVector out(fam);
  for (const auto& t : terms) {
    auto unit = t.atom == 'v' ? SuperModuleVector::v_unit(fam, t.degree)
                              : SuperModuleVector::w_unit(fam, t.degree);
    // scale via repeated add
    SuperModuleVector scaled(fam);
    for (const auto& [k, c] : unit.vterms()) scaled.add_v(k, t.coeff * c);
    for (const auto& [k, c] : unit.wterms()) scaled.add_w(k, t.coeff * c);
    out = out + scaled;
  }
  return out;
}

const Lattice& current_lattice(const Env& env, int line) {
  if (env.last_lattice.empty()) fail_at(line, Errc::UndefinedName, "no lattice declared");
  return env.lattices.at(env.last_lattice);
}

const SuperAlgebra& current_salg(const Env& env, int line) {
  if (env.last_salg.empty()) fail_at(line, Errc::UndefinedName, "no salg declared");
  return env.salgs.at(env.last_salg);
}

AlgebraElement elem_arg(const Env& env, int line, const std::string& tok) {
  auto it = env.elems.find(tok);
  if (it != env.elems.end()) return it->second;
  return build_elem(env, current_lattice(env, line), tok);
}

// Literal element arguments of module commands bind to the module's lattice.
AlgebraElement elem_arg_over(const Env& env, const Lattice& lat, const std::string& tok) {
  auto it = env.elems.find(tok);
  if (it != env.elems.end()) return it->second;
  return build_elem(env, lat, tok);
}

SuperElement selem_arg(const Env& env, int line, const std::string& tok) {
  auto it = env.selems.find(tok);
  if (it != env.selems.end()) return it->second;
  return build_selem(env, current_salg(env, line), tok);
}

SuperElement selem_arg_over(const Env& env, const SuperAlgebra& alg, const std::string& tok) {
  auto it = env.selems.find(tok);
  if (it != env.selems.end()) return it->second;
  return build_selem(env, alg, tok);
}

long int_flag(int line, const std::string& tok, const std::string& keyEq) {
  std::string v = tok.substr(keyEq.size());
  try {
    return std::stol(v);
  } catch (...) {
    fail_at(line, Errc::ParseError, keyEq + " needs an integer");
  }
}

} // namespace

SessionOutcome Session::run() const {
  SessionOutcome res;
  Env env;
  env.base_dir = impl_->base_dir;
  env.field = impl_->field;
  std::string& out = res.output;
  bool violation = false;

  for (const auto& st : impl_->stmts) {
    const auto& toks = st.toks;
    const int line = st.line;
    try {
      switch (st.kind) {
        case St::Field:
          break; // interpreted at parse time
        case St::Mode:
          env.centerless = (toks[1] == "centerless");
          break;
        case St::LatticeDecl: {
          std::vector<Scalar> gens;
          for (const auto& g : split_on(join_from(toks, 3), ','))
            gens.push_back(env.field.parse(g));
          env.lattices.emplace(toks[1], Lattice::make(env.field, gens));
          env.last_lattice = toks[1];
          break;
        }
        case St::CosetDecl:
          env.cosets.emplace(toks[1], Coset(env.lattices.at(toks[2]),
                                            env.field.parse(join_from(toks, 4))));
          break;
        case St::HomDecl: {
          std::vector<Scalar> vals;
          for (const auto& g : split_on(join_from(toks, 3), ','))
            vals.push_back(env.field.parse(g));
          env.homs.emplace(toks[1], UnitHom(env.lattices.at(toks[2]), vals));
          break;
        }
        case St::ElemDecl:
          env.elems.emplace(toks[1],
                            build_elem(env, current_lattice(env, line), join_from(toks, 3)));
          break;
        case St::SElemDecl:
          env.selems.emplace(toks[1],
                             build_selem(env, current_salg(env, line), join_from(toks, 3)));
          break;
        case St::ModuleDecl: {
          const Lattice& lat = env.lattices.at(toks.back());
          std::string a = opt_value(toks, "a="), b = opt_value(toks, "b=");
          auto sa = a.empty() ? env.field.zero() : env.field.parse(a);
          auto sb = b.empty() ? env.field.zero() : env.field.parse(b);
          ModuleFamily fam;
          if (toks[2] == "Aab") fam = ModuleFamily::Aab(lat, sa, sb);
          else if (toks[2] == "Aa") fam = ModuleFamily::Aa(lat, sa);
          else if (toks[2] == "Ba") fam = ModuleFamily::Ba(lat, sa);
          else if (toks[2] == "AabPrime") fam = ModuleFamily::AabPrime(lat, sb);
          else if (toks[2] == "TrivialLine") fam = ModuleFamily::trivial_line(lat);
          else fam = ModuleFamily::prime_plus_line(lat);
          env.modules.emplace(toks[1], fam);
          break;
        }
        case St::SAlgDecl: {
          const Lattice& lat = env.lattices.at(toks[4]);
          SuperVariant var =
              toks[2].substr(8) == "tilde" ? SuperVariant::Tilde : SuperVariant::NS;
          env.salgs.emplace(toks[1], SuperAlgebra(lat, env.field.parse(toks[6]), var));
          env.last_salg = toks[1];
          break;
        }
        case St::SModuleDecl: {
          const SuperAlgebra& alg = env.salgs.at(toks.back());
          auto sa = env.field.parse(opt_value(toks, "a="));
          SuperFamily fam;
          if (toks[2] == "SAab")
            fam = SuperFamily::SAab(alg, sa, env.field.parse(opt_value(toks, "b=")));
          else if (toks[2] == "SAa") fam = SuperFamily::SAa(alg, sa);
          else fam = SuperFamily::SBa(alg, sa);
          env.smodules.emplace(toks[1], fam);
          break;
        }
        case St::TableDecl: {
          std::ifstream f(env.base_dir + "/" + toks[3]);
          if (!f) fail_at(line, Errc::InvalidArgument, "cannot open table file " + toks[3]);
          std::stringstream ss;
          ss << f.rdbuf();
          env.tables.emplace(toks[1], parse_table(env.field, ss.str()));
          break;
        }
        case St::Bracket: {
          auto r = bracket(elem_arg(env, line, toks[1]), elem_arg(env, line, toks[2]));
          out += r.str() + "\n";
          if (toks.size() == 5) env.elems.emplace(toks[4], std::move(r));
          break;
        }
        case St::Jacobi: {
          auto r = jacobi_residual(elem_arg(env, line, toks[1]), elem_arg(env, line, toks[2]),
                                   elem_arg(env, line, toks[3]));
          out += "residual: " + r.str() + "\n";
          if (!r.is_zero()) violation = true;
          break;
        }
        case St::Grade: {
          auto comps = grading_decompose(elem_arg(env, line, toks[1]));
          if (comps.empty()) out += "0\n";
          for (const auto& [k, comp] : comps)
            out += "deg " + comp.lattice().at(k).str_compact() + ": " + comp.str() + "\n";
          break;
        }
        case St::AutoChi:
          out += apply_automorphism(env.homs.at(toks[1]), elem_arg(env, line, toks[2])).str() +
                 "\n";
          break;
        case St::AutoScale:
          out += apply_automorphism(env.field.parse(toks[1]), elem_arg(env, line, toks[2]))
                     .str() +
                 "\n";
          break;
        case St::Member: {
          auto ks = env.lattices.at(toks[1]).coords(env.field.parse(toks[2]));
          if (!ks) {
            out += "not-member\n";
          } else {
            out += "coords: (";
            for (size_t i = 0; i < ks->size(); ++i)
              out += (i ? ", " : "") + (*ks)[i].get_str();
            out += ")\n";
          }
          break;
        }
        case St::RankCmd: {
          std::vector<Scalar> xs;
          for (size_t i = 1; i < toks.size(); ++i) xs.push_back(env.field.parse(toks[i]));
          out += "rank: " + std::to_string(span_rank(env.field, xs)) + "\n";
          break;
        }
        case St::ScalerCmd:
          out += std::string("scaler: ") +
                 (scaler_test(env.lattices.at(toks[1]), env.field.parse(toks[2])) ? "true"
                                                                                  : "false") +
                 "\n";
          break;
        case St::HomEval:
          out += env.homs.at(toks[1])(env.field.parse(toks[2])).str() + "\n";
          break;
        case St::Expad: {
          auto r = exp_ad_lowering(env.field.parse(toks[1]), env.field.parse(toks[2]),
                                   elem_arg(env, line, toks[3]));
          out += r.str() + "\n";
          if (toks.size() == 6) env.elems.emplace(toks[5], std::move(r));
          break;
        }
        case St::Pair2: {
          auto p = two_dim_pair(current_lattice(env, line), env.field.parse(toks[1]),
                                env.field.parse(toks[2]),
                                static_cast<int>(int_flag(line, toks[3], "")));
          out += "X = " + p.X.str() + "\n";
          out += "Y = " + p.Y.str() + "\n";
          out += "[X, Y] = " + p.eigen.str_compact() + "*Y\n";
          break;
        }
        case St::Closure: {
          std::vector<AlgebraElement> gens;
          for (size_t i = 2; i < toks.size(); ++i) gens.push_back(elem_arg(env, line, toks[i]));
          auto rep = closure(gens, static_cast<int>(int_flag(line, toks[1], "cap=")));
          if (rep.status == ClosureReport::Status::Closed) {
            out += "closure: Closed dim " + std::to_string(rep.dim) + "\n";
            for (const auto& b : rep.basis) out += "  basis: " + b.str() + "\n";
          } else {
            out += "closure: CapExceeded dim " + std::to_string(rep.dim) + "\n";
          }
          break;
        }
        case St::Span: {
          auto target = elem_arg(env, line, toks[1]);
          std::vector<AlgebraElement> basis;
          for (size_t i = 2; i < toks.size(); ++i)
            basis.push_back(elem_arg(env, line, toks[i]));
          auto co = span_membership(target, basis);
          if (!co) {
            out += "not-in-span\n";
          } else {
            out += "in-span: (";
            for (size_t i = 0; i < co->size(); ++i)
              out += (i ? ", " : "") + (*co)[i].str();
            out += ")\n";
          }
          break;
        }
        case St::Act: {
          const auto& fam = env.modules.at(toks[1]);
          out += act(fam, elem_arg_over(env, fam.lattice(), toks[2]),
                     build_vector(env, fam, toks[3]))
                     .str() +
                 "\n";
          break;
        }
        case St::ActRes: {
          const auto& fam = env.modules.at(toks[1]);
          auto r = axiom_residual(fam, elem_arg_over(env, fam.lattice(), toks[2]),
                                  elem_arg_over(env, fam.lattice(), toks[3]),
                                  build_vector(env, fam, toks[4]));
          out += "residual: " + r.str() + "\n";
          if (!r.is_zero()) violation = true;
          break;
        }
        case St::Substruct:
          out += substructure(env.modules.at(toks[1])).str() + "\n";
          break;
        case St::Iso: {
          const auto& src = env.modules.at(toks[1]);
          const auto& dst = env.modules.at(toks[2]);
          auto window =
              box_window(src.lattice(), static_cast<int>(int_flag(line, toks[3], "window=")));
          auto r = intertwiner(src, dst, window);
          if (r.isomorphic()) {
            out += "iso: yes";
            if (!r.map->closed_form.empty()) out += " (" + r.map->closed_form + ")";
            out += "\n";
            for (const auto& [k, d] : r.map->d)
              out += "  d[" + src.lattice().at(k).str_compact() + "] = " + d.str_compact() +
                     "\n";
          } else {
            out += "iso: no (" + r.obstruction + ")\n";
            violation = true;
          }
          break;
        }
        case St::Restrict: {
          auto fam = restrict_family(env.modules.at(toks[1]), env.lattices.at(toks[2]),
                                     env.field.parse(toks[3].substr(7)));
          out += "restrict: " + fam.str() + " over " + fam.lattice().str() + "\n";
          break;
        }
        case St::FitAb: {
          std::vector<FitEntry> entries;
          for (size_t i = 1; i < toks.size(); ++i) {
            auto parts = split_on(toks[i], ':');
            entries.push_back({env.field.parse(parts[0]), env.field.parse(parts[1]),
                               env.field.parse(parts[2])});
          }
          auto r = fit_parameters(entries);
          if (r.ab) {
            out += "fit: a=" + r.ab->first.str_compact() + " b=" + r.ab->second.str_compact() +
                   "\n";
          } else {
            out += "fit: inconsistent at (" + r.violated->mu.str_compact() + ", " +
                   r.violated->nu.str_compact() + ", " + r.violated->f.str_compact() + ")\n";
            violation = true;
          }
          break;
        }
        case St::SBracket:
          out += sbracket(selem_arg(env, line, toks[1]), selem_arg(env, line, toks[2])).str() +
                 "\n";
          break;
        case St::SJacobi: {
          auto r = super_jacobi_residual(selem_arg(env, line, toks[1]),
                                         selem_arg(env, line, toks[2]),
                                         selem_arg(env, line, toks[3]));
          out += "residual: " + r.str() + "\n";
          if (!r.is_zero()) violation = true;
          break;
        }
        case St::SAct: {
          const auto& fam = env.smodules.at(toks[1]);
          out += sact(fam, selem_arg_over(env, fam.algebra(), toks[2]),
                      build_svector(env, fam, toks[3]))
                     .str() +
                 "\n";
          break;
        }
        case St::SActRes: {
          const auto& fam = env.smodules.at(toks[1]);
          auto r = saxiom_residual(fam, selem_arg_over(env, fam.algebra(), toks[2]),
                                   selem_arg_over(env, fam.algebra(), toks[3]),
                                   build_svector(env, fam, toks[4]));
          out += "residual: " + r.str() + "\n";
          if (!r.is_zero()) violation = true;
          break;
        }
        case St::ExtCheck: {
          const SuperAlgebra& base = current_salg(env, line);
          SuperVariant var =
              toks[1].substr(8) == "tilde" ? SuperVariant::Tilde : SuperVariant::NS;
          const long k = int_flag(line, toks[2], "window=");
          SuperAlgebra alg(base.lattice(), base.alpha(), var);
          auto cw = box_window(alg.lattice(), static_cast<int>(k));
          auto ew = box_window(alg.lattice(), static_cast<int>(2 * k + 2));
          auto data = canonical_extension(alg, var, cw);
          if (toks.size() == 4) {
            auto parts = split_on(toks[3].substr(8), ':');
            const Scalar pt = env.field.parse(parts[0]);
            const Scalar val = env.field.parse(parts[1]);
            auto k1 = alg.lattice().coords(pt - alg.alpha());
            auto k2 = alg.lattice().coords(-pt - alg.alpha());
            if (!k1 || !k2)
              fail_at(line, Errc::NotMember, "perturbation point outside the coset window");
            data.y[*k1] = val;
            data.y[*k2] = val;
          }
          auto violations = extension_check(alg, data, cw, ew);
          int instances = 0;
          out += "extcheck[" + std::string(variant_name(var)) + "]: " +
                 std::to_string(violations.size()) + " violations\n";
          (void)instances;
          for (size_t i = 0; i < violations.size() && i < 3; ++i)
            out += "  " + violations[i].str() + "\n";
          if (!violations.empty()) violation = true;
          break;
        }
        case St::Classify: {
          ActionTable tbl;
          auto it = env.tables.find(toks[1]);
          if (it != env.tables.end()) {
            tbl = it->second;
          } else {
            std::ifstream f(env.base_dir + "/" + toks[1]);
            if (!f) fail_at(line, Errc::InvalidArgument, "cannot open table file " + toks[1]);
            std::stringstream ss;
            ss << f.rdbuf();
            tbl = parse_table(env.field, ss.str());
          }
          auto r = classify(tbl);
          out += r.report(tbl);
          if (r.no_match()) violation = true;
          break;
        }
      }
    } catch (const Error& e) {
      res.output += "error: line " + std::to_string(line) + ": " + e.what() + "\n";
      res.exit_code = 2;
      return res;
    }
  }
  res.exit_code = violation ? 1 : 0;
  return res;
}

SessionOutcome run_session_text(const std::string& text, const std::string& base_dir) {
  try {
    Session s = Session::parse(text, base_dir);
    return s.run();
  } catch (const Error& e) {
    return {std::string("error: ") + e.what() + "\n", 2};
  }
}

Field field_from_spec_string(const std::string& spec) {
  if (spec == "Q") return Field::rationals();
  return Field::extension(parse_poly(spec));
}

} // namespace vir
