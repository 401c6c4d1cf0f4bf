#include "vir/session.hpp"
#include "vir/classifier.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>

using namespace vir;

TEST_CASE("the section-3 session") {
  const std::string text =
      "field Q\n"
      "lattice Z gens 1\n"
      "mode centerless\n"
      "elem X = 3/16*L[0] + L[1] + L[2]\n"
      "elem Y = 3/16*L[0] + 1/16*L[-1] + 1/256*L[-2]\n"
      "bracket X Y as B\n"
      "span B X Y\n";
  auto out = run_session_text(text);
  CHECK(out.exit_code == 0);
  CHECK(out.output ==
        "-3/2048*L[-2] - 3/128*L[-1] - 9/64*L[0] - 3/8*L[1] - 3/8*L[2]\n"
        "in-span: (-3/8, -3/8)\n");
  // determinism
  CHECK(run_session_text(text).output == out.output);
}

TEST_CASE("parse errors carry line numbers") {
  // use before declaration
  auto check_error = [](const std::string& text, Errc code, const char* lineref) {
    try {
      Session::parse(text);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == code);
      CHECK(std::string(e.what()).find(lineref) != std::string::npos);
    }
  };
  check_error("field Q\nlattice Z gens 1\nbracket X Y\n", Errc::UndefinedName, "line 3");
  check_error("field Q\nlattice Z gens 1\nelem X = L[0]\nelem X = L[1]\n",
              Errc::RedefinedName, "line 4");
  check_error("field Q\nlattice Z gens 1\nelem X = L[t]\n", Errc::ParseError, "line 3");
  check_error("field Q\nnonsense 1 2\n", Errc::ParseError, "line 2");
  check_error("lattice Z gens 1\n", Errc::UndefinedName, "line 1"); // no field
  check_error("field Q\nfield Q\n", Errc::RedefinedName, "line 2");
}

TEST_CASE("runtime errors report the line and exit nonzero") {
  const std::string text =
      "field Q\n"
      "lattice Z gens 1\n"
      "member Z 1/2\n"
      "scaler Z 0\n"; // ZeroScaler at line 4
  auto out = run_session_text(text);
  CHECK(out.exit_code == 2);
  CHECK(out.output.find("not-member\n") != std::string::npos);
  CHECK(out.output.find("error: line 4") != std::string::npos);
}

TEST_CASE("violations flip the exit code") {
  const std::string ok =
      "field Q\nlattice Z gens 1\n"
      "jacobi L[1] L[-1] L[0]\n";
  auto r1 = run_session_text(ok);
  CHECK(r1.exit_code == 0);
  CHECK(r1.output == "residual: 0\n");

  // a NoMatch verdict is a violation
  Field q = Field::rationals();
  Lattice z = Lattice::make(q, {q.one()});
  std::vector<std::vector<Int>> win;
  for (int i = -3; i <= 3; ++i) win.push_back({Int(i)});
  auto tbl =
      table_from_family(ModuleFamily::Aab(z, q.of(Rat(1, 3)), q.of_int(5)),
                        {q.one(), q.of_int(2)}, win);
  tbl.f[{0, {Int(0)}}] = q.of_int(7);
  const std::string path = "/tmp/vir_test_bad_table.tbl";
  std::ofstream(path) << format_table(tbl);
  auto r2 = run_session_text("field Q\nclassify " + path + "\n", "/");
  CHECK(r2.exit_code == 1);
  CHECK(r2.output.find("verdict: NoMatch") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("printed elements re-parse to equal values") {
  const std::string text =
      "field Q(t) minpoly t^2 - 2\n"
      "lattice M gens 1, t\n"
      "elem A = 1/2*L[1+t] - L[0] + 3*c\n"
      "bracket A A\n";
  auto out = run_session_text(text);
  CHECK(out.exit_code == 0);
  CHECK(out.output == "0\n");

  Field f = field_from_spec_string("t^2 - 2");
  Lattice m = Lattice::make(f, {f.one(), f.theta()});
  auto a = f.of(Rat(1, 2)) * AlgebraElement::L(m, f.one() + f.theta(), false) -
           AlgebraElement::L(m, f.zero(), false) +
           f.of_int(3) * AlgebraElement::central(m);
  // session literal round trip through the canonical printer
  const std::string text2 = "field Q(t) minpoly t^2 - 2\nlattice M gens 1, t\nelem A = " +
                            a.str() + "\nbracket A A\n";
  CHECK(run_session_text(text2).exit_code == 0);
}

TEST_CASE("coset declarations and table file errors") {
  // coset offsets must parse and the lattice must exist
  CHECK(run_session_text("field Q\nlattice Z gens 1\ncoset C Z + 1/2\n").exit_code == 0);
  try {
    Session::parse("field Q\ncoset C Z + 1/2\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UndefinedName);
  }
  // missing table file is a runtime error with the line number
  auto out = run_session_text("field Q\ntable T file does_not_exist.tbl\n", "/tmp");
  CHECK(out.exit_code == 2);
  CHECK(out.output.find("error: line 2") != std::string::npos);
}

TEST_CASE("every command produces deterministic output") {
  const std::string text =
      "field Q\n"
      "lattice Z gens 1\n"
      "hom chi Z 2\n"
      "member Z -5\n"
      "rank 1 -1 2\n"
      "scaler Z -1\n"
      "homeval chi 3\n"
      "elem E = L[2] + c\n"
      "grade E\n"
      "autochi chi E\n"
      "autoscale -1 E\n"
      "module M1 Aab a=1/2 b=2 over Z\n"
      "act M1 L[1] v[0]\n"
      "actres M1 L[1] L[2] v[0]\n"
      "substruct M1\n"
      "module M2 Ba a=1 over Z\n"
      "substruct M2\n"
      "restrict M2 Z offset=0\n"
      "fitab 1:0:11/2 2:0:21/2\n";
  auto out = run_session_text(text);
  CHECK(out.exit_code == 0);
  CHECK(out.output == run_session_text(text).output);
  CHECK(out.output.find("coords: (-5)") != std::string::npos);
  CHECK(out.output.find("rank: 1") != std::string::npos);
  CHECK(out.output.find("scaler: true") != std::string::npos);
  CHECK(out.output.find("5/2*v[1]") != std::string::npos);
  CHECK(out.output.find("residual: 0") != std::string::npos);
  CHECK(out.output.find("fit: a=1/2 b=5") != std::string::npos);
}
