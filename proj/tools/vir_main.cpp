#include "vir/classifier.hpp"
#include "vir/session.hpp"
#include "vir/suites.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact kernel for generalized Virasoro and super-Virasoro algebras"};
  app.require_subcommand(1);

  std::string session_path;
  auto* run = app.add_subcommand("run", "execute a session file");
  run->add_option("session", session_path, "session file")->required();

  std::string table_path;
  auto* cls = app.add_subcommand("classify", "classify a structure-constant table file");
  cls->add_option("table", table_path, "table file")->required();
  std::string cls_field = "Q";
  cls->add_option("--field", cls_field,
                  "ground field: Q or a monic minimal polynomial in t (e.g. 't^2-2')");

  std::string suite_name;
  std::uint64_t seed = 0;
  int samples = 0;
  auto* chk = app.add_subcommand("check", "run a seeded randomized verification suite");
  chk->add_option("--suite", suite_name,
                  "lie | automorphism | modules | super | classifier | all")
      ->required();
  chk->add_option("--seed", seed, "PRNG seed (mandatory for reproducibility)")->required();
  chk->add_option("--samples", samples, "sample count per sweep")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const std::string text = read_file(session_path);
      const std::string dir = std::filesystem::path(session_path).parent_path().string();
      auto outcome = vir::run_session_text(text, dir.empty() ? "." : dir);
      std::cout << outcome.output;
      return outcome.exit_code;
    }
    if (*cls) {
      vir::Field field = vir::field_from_spec_string(cls_field);
      auto table = vir::parse_table(field, read_file(table_path));
      auto res = vir::classify(table);
      std::cout << res.report(table);
      return res.no_match() ? 1 : 0;
    }
    if (*chk) {
      bool ok = true;
      for (const auto& r : vir::run_suites(suite_name, seed, samples)) {
        std::cout << r.summary(seed) << "\n";
        ok = ok && r.ok();
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
