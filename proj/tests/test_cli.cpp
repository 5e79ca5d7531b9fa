#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "bhscat/cli.hpp"
#include "bhscat/errors.hpp"
#include "synthetic.hpp"

using namespace bhscat;
namespace fs = std::filesystem;

namespace {

fs::path tmpdir() {
  auto p = fs::temp_directory_path() / "bhscat_cli_test";
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

#ifdef CLI_BIN
int run_cli(const std::string& args) {
  std::string cmd = std::string(CLI_BIN) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}
#endif

}  // namespace

TEST_CASE("config loading: defaults, overrides, and diagnostics") {
  auto dir = tmpdir();
  write_file(dir / "ok.json",
             R"({"M": 2.0, "Q": 0.5, "Lambda": 0.01, "weights": [1, 3],
                 "tolerances": {"unitarity": 1e-5}})");
  auto cfg = cli::load_config((dir / "ok.json").string());
  CHECK(cfg.bh.M == 2.0);
  CHECK(cfg.weights == std::vector<int>{1, 3});
  CHECK(cfg.tol.unitarity == 1e-5);
  CHECK(cfg.xi_count == 1201);  // default survives

  CHECK_THROWS_AS(cli::load_config((dir / "absent.json").string()), bhscat::IoError);
  write_file(dir / "bad.json", "{ not json");
  CHECK_THROWS_AS(cli::load_config((dir / "bad.json").string()), bhscat::ConfigError);
  write_file(dir / "inv.json", R"({"M": 1.0, "xi_min": 5.0, "xi_max": -5.0})");
  try {
    cli::load_config((dir / "inv.json").string());
    CHECK(false);
  } catch (const bhscat::ConfigError& e) {
    CHECK(std::string(e.what()).find("xi_min") != std::string::npos);
  }
}

TEST_CASE("tolerance overrides parse name=value") {
  cli::Tolerances tol;
  cli::apply_tolerance_override(tol, "iteration=1e-7");
  CHECK(tol.iteration == 1e-7);
  CHECK_THROWS_AS(cli::apply_tolerance_override(tol, "wat=1"), bhscat::ConfigError);
  CHECK_THROWS_AS(cli::apply_tolerance_override(tol, "iteration"), bhscat::ConfigError);
  CHECK_THROWS_AS(cli::apply_tolerance_override(tol, "iteration=2.0"),
                  bhscat::ConfigError);
}

TEST_CASE("scattering table serialization is the identity") {
  auto g = testutil::synth_grid(0.4, 0.25, 0.3);
  std::vector<jost::ScatteringMatrix> tab;
  for (double xi = -2.0; xi <= 2.0 + 1e-12; xi += 0.25)
    tab.push_back(jost::scattering_matrix(g, xi));
  auto path = (tmpdir() / "tab.csv").string();
  cli::write_scattering_table(path, tab);
  auto back = cli::read_scattering_table(path);
  REQUIRE(back.size() == tab.size());
  for (size_t i = 0; i < tab.size(); ++i) {
    CHECK(back[i].xi == tab[i].xi);
    CHECK((back[i].TL - tab[i].TL).frobenius() == 0.0);
    CHECK((back[i].R - tab[i].R).frobenius() == 0.0);
    CHECK((back[i].L - tab[i].L).frobenius() == 0.0);
    CHECK((back[i].TR - tab[i].TR).frobenius() == 0.0);
    CHECK(back[i].unitarity_defect == tab[i].unitarity_defect);
  }
  // re-serialization is byte-identical (determinism)
  auto path2 = (tmpdir() / "tab2.csv").string();
  cli::write_scattering_table(path2, back);
  std::ifstream a(path), b(path2);
  std::string sa((std::istreambuf_iterator<char>(a)), {});
  std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
}

TEST_CASE("pairing and reconstruction tables round-trip") {
  recovery::PairingData d;
  d.weight = 2;
  d.lambdas = {50, 100};
  d.shifts = {0.0, 0.5, 1.0};
  d.F = {{{1.0, 2.0}, {3.0, -1.0}}, {{0.1, 0.2}, {0.3, 0.4}}, {{-1.5, 0.0}, {2.5, 1e-17}}};
  auto p = (tmpdir() / "pairing.csv").string();
  cli::write_pairing_table(p, d);
  auto e = cli::read_pairing_table(p);
  CHECK(e.weight == d.weight);
  CHECK(e.lambdas == d.lambdas);
  CHECK(e.shifts == d.shifts);
  CHECK(e.F == d.F);

  cli::ReconstructionTable t;
  t.weights = {1, 2};
  t.x = {-1.0, 0.0, 1.0};
  t.theta = {{0.6, 0.8}, {1.0, 0.0}, {0.0, -1.0}};
  t.A = {{{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.6}}, {{1, 1}, {2, 2}, {3, 3}}};
  auto rp = (tmpdir() / "recon.csv").string();
  cli::write_reconstruction_table(rp, t);
  auto u = cli::read_reconstruction_table(rp);
  CHECK(u.weights == t.weights);
  CHECK(u.x == t.x);
  CHECK(u.theta == t.theta);
  CHECK(u.A == t.A);
}

TEST_CASE("report files round-trip") {
  cli::Report kv{{"M", cli::fmt(1.25)}, {"note", "pass measured=3"}};
  auto p = (tmpdir() / "report.txt").string();
  cli::write_report(p, kv);
  CHECK(cli::read_report(p) == kv);
}

#ifdef CLI_BIN
TEST_CASE("command-line exit codes") {
  auto dir = tmpdir();
  write_file(dir / "geo.json",
             R"({"M": 5.0, "Q": 3.0, "Lambda": 0.0, "out": ")" + (dir / "out").string() +
                 R"("})");
  CHECK(run_cli("geometry " + (dir / "geo.json").string()) == 0);
  CHECK(fs::exists(dir / "out" / "geometry.txt"));
  auto kv = cli::read_report((dir / "out" / "geometry.txt").string());
  bool found = false;
  for (const auto& [k, v] : kv)
    if (k == "r_0") {
      CHECK(std::stod(v) == doctest::Approx(9.0).epsilon(1e-12));
      found = true;
    }
  CHECK(found);

  write_file(dir / "neg.json", R"({"M": -5.0})");
  CHECK(run_cli("geometry " + (dir / "neg.json").string()) == 2);
  CHECK(run_cli("geometry " + (dir / "missing.json").string()) == 3);
  CHECK(run_cli("invert " + (dir / "geo.json").string() + " --mode marchenko --data " +
                (dir / "nodata").string()) == 3);
  CHECK(run_cli("frobnicate") == 2);
}
#endif
