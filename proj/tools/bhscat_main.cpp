// Command-line front end: geometry / forward / asymptotics / invert / verify.
// Exit codes: 0 success, 2 config error, 3 I/O error, 4 numerical-quality
// failure, 5 convergence failure.
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bhscat/asymptotics.hpp"
#include "bhscat/cli.hpp"
#include "bhscat/errors.hpp"
#include "bhscat/geometry.hpp"
#include "bhscat/jost.hpp"
#include "bhscat/marchenko.hpp"
#include "bhscat/recovery.hpp"
#include "bhscat/reduction.hpp"

using namespace bhscat;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_override;
  std::vector<std::string> tol_overrides;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "JSON run configuration")->required();
  cmd->add_option("--out", args.out_override, "output directory (overrides config)");
  cmd->add_option("--tolerance", args.tol_overrides,
                  "tolerance override name=value (quadrature|ode|iteration|unitarity)");
  cmd->add_option("--threads", args.threads, "worker count (sweeps are serial here)");
}

cli::RunConfig load(const CommonArgs& args) {
  auto cfg = cli::load_config(args.config_path);
  if (!args.out_override.empty()) cfg.out_dir = args.out_override;
  for (const auto& s : args.tol_overrides) cli::apply_tolerance_override(cfg.tol, s);
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + cfg.out_dir);
  return cfg;
}

std::vector<double> xi_grid(const cli::RunConfig& cfg) {
  std::vector<double> xs(cfg.xi_count);
  double d = (cfg.xi_max - cfg.xi_min) / (cfg.xi_count - 1);
  for (int i = 0; i < cfg.xi_count; ++i) xs[i] = cfg.xi_min + i * d;
  return xs;
}

// Builds the sampled potential, honoring the x_max override and the
// synthetic zero-potential mode.
reduction::KGrid grid_for(const cli::RunConfig& cfg, const reduction::PotentialProfile& prof) {
  if (cfg.synthetic_zero) {
    reduction::KGrid g;
    double X = cfg.x_max > 0 ? cfg.x_max : 10.0;
    g.x_lo = -X;
    g.x_hi = X;
    g.step = cfg.x_step;
    g.n_steps = static_cast<int>(std::round(2 * X / cfg.x_step));
    g.a.assign(2 * g.n_steps + 1, 0.0);
    g.b.assign(2 * g.n_steps + 1, 0.0);
    g.C.assign(2 * g.n_steps + 1, 0.0);
    return g;
  }
  auto g = reduction::build_kgrid(prof, cfg.x_step, cfg.tail_tol);
  if (cfg.x_max > 0) {
    if (g.x_hi > cfg.x_max || g.x_lo < -cfg.x_max)
      throw ConfigError("x_max override is smaller than the potential support; "
                        "use x_max = 0 for the automatic range");
  }
  return g;
}

std::string wpath(const cli::RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

int cmd_geometry(const CommonArgs& args) {
  auto cfg = load(args);
  geometry::ReggeWheelerMap map(cfg.bh);
  const auto& hz = map.horizons();
  cli::Report kv;
  kv.emplace_back("M", cli::fmt(cfg.bh.M));
  kv.emplace_back("Q", cli::fmt(cfg.bh.Q));
  kv.emplace_back("Lambda", cli::fmt(cfg.bh.Lambda));
  kv.emplace_back("r_minus", cli::fmt(hz.r_minus));
  kv.emplace_back("r_0", cli::fmt(hz.r_0));
  kv.emplace_back("r_plus", cli::fmt(hz.r_plus));
  kv.emplace_back("kappa_0", cli::fmt(hz.kappa_0));
  kv.emplace_back("kappa_plus", cli::fmt(hz.kappa_plus));
  kv.emplace_back("r_anchor", cli::fmt(map.r_anchor()));
  cli::write_report(wpath(cfg, "geometry.txt"), kv);
  for (const auto& [k, v] : kv) std::printf("%s = %s\n", k.c_str(), v.c_str());
  // sample (r, x) table across the tabulated range
  std::string tp = wpath(cfg, "tortoise.csv");
  {
    std::FILE* f = std::fopen(tp.c_str(), "w");
    if (!f) throw IoError("cannot open output file: " + tp);
    std::fprintf(f, "r,x\n");
    int n = 33;
    for (int i = 0; i < n; ++i) {
      double r = map.r_min() + (map.r_max() - map.r_min()) * i / double(n - 1);
      std::fprintf(f, "%s,%s\n", cli::fmt(r).c_str(), cli::fmt(map.x_of_r(r)).c_str());
    }
    std::fclose(f);
  }
  return 0;
}

int cmd_forward(const CommonArgs& args) {
  auto cfg = load(args);
  if (cfg.bh.Lambda <= 0 && !cfg.synthetic_zero)
    throw ConfigError("forward sweeps need Lambda > 0 (bounded potential range)");
  auto map = std::make_shared<geometry::ReggeWheelerMap>(cfg.bh);
  auto xs = xi_grid(cfg);
  cli::Report kv;
  double worst = 0;
  for (int w : cfg.weights) {
    reduction::PotentialProfile prof(map, cfg.field, w);
    auto g = grid_for(cfg, prof);
    std::vector<jost::ScatteringMatrix> tab;
    tab.reserve(xs.size());
    for (double xi : xs) tab.push_back(jost::scattering_matrix(g, xi));
    double defect = 0;
    for (const auto& s : tab) defect = std::max(defect, s.unitarity_defect);
    worst = std::max(worst, defect);
    cli::write_scattering_table(wpath(cfg, "scattering_w" + std::to_string(w) + ".csv"),
                                tab);
    kv.emplace_back("max_unitarity_defect_w" + std::to_string(w), cli::fmt(defect));
  }
  cli::write_report(wpath(cfg, "forward.txt"), kv);
  for (const auto& [k, v] : kv) std::printf("%s = %s\n", k.c_str(), v.c_str());
  if (worst > cfg.tol.unitarity)
    throw QualityError("unitarity defect " + cli::fmt(worst) + " exceeds tolerance " +
                       cli::fmt(cfg.tol.unitarity));
  return 0;
}

void default_packets(asymptotics::WavePacket& psi, asymptotics::WavePacket& phi) {
  psi.dn = {0.8, -0.3};
  phi.dn = {1.0, 0.4};
  psi.up = {1.0, 0.0};
  phi.up = {1.0, 0.0};
}

int cmd_asymptotics(const CommonArgs& args) {
  auto cfg = load(args);
  auto map = std::make_shared<geometry::ReggeWheelerMap>(cfg.bh);
  if (cfg.bh.Lambda > 0) {
    asymptotics::WavePacket psi, phi;
    default_packets(psi, phi);
    for (int w : cfg.weights) {
      reduction::PotentialProfile prof(map, cfg.field, w);
      auto g = grid_for(cfg, prof);
      auto data = recovery::make_pairing_data(prof, g, psi, phi, cfg.lambdas, cfg.shifts);
      cli::write_pairing_table(wpath(cfg, "pairing_w" + std::to_string(w) + ".csv"), data);
    }
    std::printf("wrote %zu pairing tables to %s\n", cfg.weights.size(),
                cfg.out_dir.c_str());
  } else {
    // flat regime: tabulate the closed-form reconstruction pair
    cli::ReconstructionTable t;
    t.weights = cfg.weights;
    for (int i = 0; i <= 40; ++i) t.x.push_back(-2.0 + 4.0 * i / 40.0);
    bool first = true;
    for (int w : cfg.weights) {
      reduction::PotentialProfile prof(map, cfg.field, w);
      auto pair = asymptotics::reconstruction_pair(prof);
      std::vector<cplx> A;
      for (double x : t.x) A.push_back(pair.A(x));
      t.A.push_back(std::move(A));
      if (first)
        for (double x : t.x) t.theta.push_back(pair.Theta(x));
      first = false;
    }
    cli::write_reconstruction_table(wpath(cfg, "reconstruction.csv"), t);
    std::printf("wrote reconstruction table to %s\n", cfg.out_dir.c_str());
  }
  return 0;
}

int cmd_invert(const CommonArgs& args, const std::string& mode, const std::string& data) {
  auto cfg = load(args);
  recovery::RecoveryReport rep;
  if (mode == "highenergy") {
    if (cfg.bh.Lambda > 0) {
      std::vector<recovery::PairingData> pd;
      for (int w : cfg.weights)
        pd.push_back(cli::read_pairing_table(
            (fs::path(data) / ("pairing_w" + std::to_string(w) + ".csv")).string()));
      rep = recovery::pipeline_dS(pd, cfg.field.mass, cfg.field.charge);
    } else {
      auto t = cli::read_reconstruction_table(
          (fs::path(data) / "reconstruction.csv").string());
      rep = recovery::pipeline_RN(t.x, t.theta, t.weights, t.A, cfg.field.charge);
    }
  } else if (mode == "marchenko") {
    std::vector<marchenko::KRecovery> recs;
    for (int w : cfg.weights) {
      auto tab = cli::read_scattering_table(
          (fs::path(data) / ("scattering_w" + std::to_string(w) + ".csv")).string());
      auto kern = marchenko::fourier_kernels(tab, cfg.alpha_max, cfg.h_alpha);
      if (kern.sup_R >= 1.0)
        throw QualityError("reflection operator norm >= 1; inversion not contractive");
      recs.push_back(marchenko::recover_k(kern, cfg.inv_x_lo, cfg.inv_x_hi, cfg.inv_dx,
                                          cfg.tol.iteration));
    }
    rep = marchenko::recover_bh_from_k(recs, cfg.weights, cfg.field.mass,
                                       cfg.field.charge);
  } else {
    throw ConfigError("unknown invert mode: " + mode + " (highenergy|marchenko)");
  }
  auto kv = cli::recovery_report_kv(rep);
  cli::write_report(wpath(cfg, "recovery_" + mode + ".txt"), kv);
  for (const auto& [k, v] : kv) std::printf("%s = %s\n", k.c_str(), v.c_str());
  return 0;
}

int cmd_verify(const CommonArgs& args) {
  auto cfg = load(args);
  if (cfg.bh.Lambda <= 0)
    throw ConfigError("verify needs Lambda > 0 (bounded potential range)");
  auto map = std::make_shared<geometry::ReggeWheelerMap>(cfg.bh);
  cli::Report kv;
  bool all_ok = true;
  auto check = [&](const std::string& name, double measured, double limit) {
    bool ok = measured < limit;
    all_ok = all_ok && ok;
    kv.emplace_back(name, std::string(ok ? "pass" : "FAIL") + " measured=" +
                              cli::fmt(measured) + " limit=" + cli::fmt(limit));
  };

  // closed-form integral identities
  double worst_rel = 0;
  for (int w : cfg.weights) {
    reduction::PotentialProfile prof(map, cfg.field, w);
    double closed = reduction::w2_integral_closed_dS(map->horizons(), cfg.field, w);
    double quadr = reduction::w2_integral_quadrature(prof);
    worst_rel = std::max(worst_rel, std::abs(quadr - closed) / std::abs(closed));
  }
  check("integral_identity_rel_err", worst_rel, cfg.tol.quadrature);

  reduction::PotentialProfile prof(map, cfg.field, cfg.weights.front());
  auto g = grid_for(cfg, prof);

  // unitarity over a thinned xi grid
  double defect = 0;
  auto xs = xi_grid(cfg);
  size_t stride = std::max<size_t>(1, xs.size() / 41);
  for (size_t i = 0; i < xs.size(); i += stride)
    defect = std::max(defect, jost::scattering_matrix(g, xs[i]).unitarity_defect);
  check("unitarity_defect", defect, cfg.tol.unitarity);

  // high-energy expansion residual slope
  asymptotics::WavePacket psi, phi;
  default_packets(psi, phi);
  auto scan = asymptotics::expansion_residual_scan(prof, g, psi, phi, cfg.lambdas,
                                                   asymptotics::Channel::T_R);
  check("expansion_slope_deviation", std::abs(scan.slope + 2.0), 0.5);

  // Fourier decay of the reflection kernel
  std::vector<jost::ScatteringMatrix> tab;
  for (double xi : xs) tab.push_back(jost::scattering_matrix(g, xi));
  auto kern = marchenko::fourier_kernels(tab, cfg.alpha_max, cfg.h_alpha);
  check("fourier_decay_rate_negated", -kern.decay_rate_R, 0.0);
  auto cert = marchenko::decay_certificate(kern, false);
  bool l2_ok = std::isfinite(cert.weighted_l2) && cert.weighted_l2 > 0;
  check("fourier_weighted_l2_defect", l2_ok ? 0.0 : 1.0, 0.5);

  cli::write_report(wpath(cfg, "verify.txt"), kv);
  for (const auto& [k, v] : kv) std::printf("%s = %s\n", k.c_str(), v.c_str());
  if (!all_ok) throw QualityError("verification checks failed; see verify.txt");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac scattering on charged black-hole exteriors"};
  app.require_subcommand(1);
  CommonArgs a_geom, a_fwd, a_asym, a_inv, a_ver;
  std::string inv_mode = "highenergy", inv_data = ".";
  auto* c_geom = app.add_subcommand("geometry", "horizon and tortoise-map report");
  add_common(c_geom, a_geom);
  auto* c_fwd = app.add_subcommand("forward", "scattering sweep tables");
  add_common(c_fwd, a_fwd);
  auto* c_asym = app.add_subcommand("asymptotics", "pairing / reconstruction tables");
  add_common(c_asym, a_asym);
  auto* c_inv = app.add_subcommand("invert", "parameter recovery from data tables");
  add_common(c_inv, a_inv);
  c_inv->add_option("--mode", inv_mode, "highenergy|marchenko");
  c_inv->add_option("--data", inv_data, "directory with input tables")->required();
  auto* c_ver = app.add_subcommand("verify", "identity and decay checks");
  add_common(c_ver, a_ver);

  try {
    app.parse(argc, argv);
    if (c_geom->parsed()) return cmd_geometry(a_geom);
    if (c_fwd->parsed()) return cmd_forward(a_fwd);
    if (c_asym->parsed()) return cmd_asymptotics(a_asym);
    if (c_inv->parsed()) return cmd_invert(a_inv, inv_mode, inv_data);
    if (c_ver->parsed()) return cmd_verify(a_ver);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
