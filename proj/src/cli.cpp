#include "bhscat/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bhscat/errors.hpp"

namespace bhscat::cli {

using nlohmann::json;

void Tolerances::validate() const {
  auto chk = [](double v, const char* name) {
    if (!(v > 0.0 && v < 1.0))
      throw ConfigError(std::string("tolerances.") + name + " must lie in (0, 1)");
  };
  chk(quadrature, "quadrature");
  chk(ode, "ode");
  chk(iteration, "iteration");
  chk(unitarity, "unitarity");
}

void RunConfig::validate() const {
  bh.validate();
  field.validate();
  if (weights.empty()) throw ConfigError("weights must be non-empty");
  for (int w : weights)
    if (w < 1) throw ConfigError("weights entries must be >= 1");
  if (!(xi_min < xi_max)) throw ConfigError("xi_min must be < xi_max");
  if (xi_count < 2) throw ConfigError("xi_count must be >= 2");
  if (!(x_step > 0)) throw ConfigError("x_step must be positive");
  if (x_max < 0) throw ConfigError("x_max must be >= 0 (0 = automatic)");
  if (!(tail_tol > 0 && tail_tol < 1)) throw ConfigError("tail_tol must lie in (0, 1)");
  if (lambdas.empty()) throw ConfigError("lambdas must be non-empty");
  for (double l : lambdas)
    if (!(l > 0)) throw ConfigError("lambdas entries must be positive");
  if (shifts.empty()) throw ConfigError("shifts must be non-empty");
  if (!(alpha_max > 0)) throw ConfigError("alpha_max must be positive");
  if (!(h_alpha > 0)) throw ConfigError("h_alpha must be positive");
  if (!(inv_x_lo < inv_x_hi)) throw ConfigError("inv_x_lo must be < inv_x_hi");
  if (!(inv_dx > 0)) throw ConfigError("inv_dx must be positive");
  tol.validate();
  if (out_dir.empty()) throw ConfigError("out_dir must be non-empty");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  RunConfig cfg;
  try {
    cfg.bh.M = j.value("M", cfg.bh.M);
    cfg.bh.Q = j.value("Q", cfg.bh.Q);
    cfg.bh.Lambda = j.value("Lambda", cfg.bh.Lambda);
    cfg.field.mass = j.value("m_f", cfg.field.mass);
    cfg.field.charge = j.value("q_f", cfg.field.charge);
    if (j.contains("weights")) cfg.weights = j["weights"].get<std::vector<int>>();
    cfg.xi_min = j.value("xi_min", cfg.xi_min);
    cfg.xi_max = j.value("xi_max", cfg.xi_max);
    cfg.xi_count = j.value("xi_count", cfg.xi_count);
    cfg.x_step = j.value("x_step", cfg.x_step);
    cfg.x_max = j.value("x_max", cfg.x_max);
    cfg.tail_tol = j.value("tail_tol", cfg.tail_tol);
    if (j.contains("lambdas")) cfg.lambdas = j["lambdas"].get<std::vector<double>>();
    if (j.contains("shifts")) cfg.shifts = j["shifts"].get<std::vector<double>>();
    cfg.alpha_max = j.value("alpha_max", cfg.alpha_max);
    cfg.h_alpha = j.value("h_alpha", cfg.h_alpha);
    cfg.inv_x_lo = j.value("inv_x_lo", cfg.inv_x_lo);
    cfg.inv_x_hi = j.value("inv_x_hi", cfg.inv_x_hi);
    cfg.inv_dx = j.value("inv_dx", cfg.inv_dx);
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      cfg.tol.quadrature = t.value("quadrature", cfg.tol.quadrature);
      cfg.tol.ode = t.value("ode", cfg.tol.ode);
      cfg.tol.iteration = t.value("iteration", cfg.tol.iteration);
      cfg.tol.unitarity = t.value("unitarity", cfg.tol.unitarity);
    }
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.synthetic_zero = j.value("synthetic_zero", cfg.synthetic_zero);
  } catch (const json::exception& e) {
    throw ConfigError("config field type error in " + path + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

void apply_tolerance_override(Tolerances& tol, const std::string& entry) {
  auto eq = entry.find('=');
  if (eq == std::string::npos)
    throw ConfigError("tolerance override must be name=value: " + entry);
  std::string name = entry.substr(0, eq);
  double value;
  try {
    value = std::stod(entry.substr(eq + 1));
  } catch (...) {
    throw ConfigError("tolerance override has a non-numeric value: " + entry);
  }
  if (name == "quadrature")
    tol.quadrature = value;
  else if (name == "ode")
    tol.ode = value;
  else if (name == "iteration")
    tol.iteration = value;
  else if (name == "unitarity")
    tol.unitarity = value;
  else
    throw ConfigError("unknown tolerance name: " + name);
  tol.validate();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);
  return in;
}

void put_mat(std::ostream& os, const Mat2& m) {
  for (int c = 0; c < 4; ++c)
    os << ',' << fmt(m.e[c].real()) << ',' << fmt(m.e[c].imag());
}

std::vector<double> split_row(const std::string& line, const std::string& path) {
  std::vector<double> vals;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      vals.push_back(std::stod(cell));
    } catch (...) {
      throw IoError("malformed numeric cell in " + path + ": " + cell);
    }
  }
  return vals;
}

}  // namespace

void write_scattering_table(const std::string& path,
                            const std::vector<jost::ScatteringMatrix>& tab) {
  auto out = open_out(path);
  out << "xi";
  for (const char* b : {"TL", "R", "L", "TR"})
    for (const char* e : {"00", "01", "10", "11"})
      out << ',' << b << e << "_re," << b << e << "_im";
  out << ",unitarity_defect,consistency_defect\n";
  for (const auto& s : tab) {
    out << fmt(s.xi);
    put_mat(out, s.TL);
    put_mat(out, s.R);
    put_mat(out, s.L);
    put_mat(out, s.TR);
    out << ',' << fmt(s.unitarity_defect) << ',' << fmt(s.formula_mismatch) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<jost::ScatteringMatrix> read_scattering_table(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("xi,", 0) != 0)
    throw IoError("not a scattering table (bad header): " + path);
  std::vector<jost::ScatteringMatrix> tab;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto v = split_row(line, path);
    if (v.size() != 1 + 32 + 2)
      throw IoError("bad scattering row width in " + path);
    jost::ScatteringMatrix s;
    s.xi = v[0];
    Mat2* blocks[4] = {&s.TL, &s.R, &s.L, &s.TR};
    int idx = 1;
    for (Mat2* b : blocks)
      for (int c = 0; c < 4; ++c, idx += 2) b->e[c] = cplx(v[idx], v[idx + 1]);
    s.unitarity_defect = v[33];
    s.formula_mismatch = v[34];
    tab.push_back(s);
  }
  if (tab.empty()) throw IoError("empty scattering table: " + path);
  return tab;
}

void write_pairing_table(const std::string& path, const recovery::PairingData& data) {
  auto out = open_out(path);
  out << "weight,shift,lambda,F_re,F_im\n";
  for (size_t i = 0; i < data.shifts.size(); ++i)
    for (size_t l = 0; l < data.lambdas.size(); ++l)
      out << data.weight << ',' << fmt(data.shifts[i]) << ',' << fmt(data.lambdas[l])
          << ',' << fmt(data.F[i][l].real()) << ',' << fmt(data.F[i][l].imag()) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

recovery::PairingData read_pairing_table(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("weight,", 0) != 0)
    throw IoError("not a pairing table (bad header): " + path);
  recovery::PairingData data;
  std::vector<cplx> flat;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto v = split_row(line, path);
    if (v.size() != 5) throw IoError("bad pairing row width in " + path);
    data.weight = static_cast<int>(v[0]);
    if (data.shifts.empty() || v[1] != data.shifts.back()) data.shifts.push_back(v[1]);
    if (data.shifts.size() == 1) data.lambdas.push_back(v[2]);
    flat.emplace_back(v[3], v[4]);
  }
  if (flat.size() != data.shifts.size() * data.lambdas.size())
    throw IoError("ragged pairing table: " + path);
  data.F.resize(data.shifts.size());
  for (size_t i = 0; i < data.shifts.size(); ++i)
    data.F[i].assign(flat.begin() + i * data.lambdas.size(),
                     flat.begin() + (i + 1) * data.lambdas.size());
  return data;
}

void write_reconstruction_table(const std::string& path, const ReconstructionTable& t) {
  auto out = open_out(path);
  out << "x,theta_re,theta_im";
  for (int w : t.weights) out << ",A" << w << "_re,A" << w << "_im";
  out << '\n';
  for (size_t i = 0; i < t.x.size(); ++i) {
    out << fmt(t.x[i]) << ',' << fmt(t.theta[i].real()) << ',' << fmt(t.theta[i].imag());
    for (size_t w = 0; w < t.weights.size(); ++w)
      out << ',' << fmt(t.A[w][i].real()) << ',' << fmt(t.A[w][i].imag());
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

ReconstructionTable read_reconstruction_table(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,theta_re", 0) != 0)
    throw IoError("not a reconstruction table (bad header): " + path);
  ReconstructionTable t;
  {  // parse the weight labels from the header
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ','))
      if (col.size() > 3 && col[0] == 'A' && col.substr(col.size() - 3) == "_re")
        t.weights.push_back(std::stoi(col.substr(1)));
  }
  t.A.resize(t.weights.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto v = split_row(line, path);
    if (v.size() != 3 + 2 * t.weights.size())
      throw IoError("bad reconstruction row width in " + path);
    t.x.push_back(v[0]);
    t.theta.emplace_back(v[1], v[2]);
    for (size_t w = 0; w < t.weights.size(); ++w)
      t.A[w].emplace_back(v[3 + 2 * w], v[4 + 2 * w]);
  }
  if (t.x.empty()) throw IoError("empty reconstruction table: " + path);
  return t;
}

void write_report(const std::string& path, const Report& kv) {
  auto out = open_out(path);
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  if (!out) throw IoError("write failed: " + path);
}

Report read_report(const std::string& path) {
  auto in = open_in(path);
  Report kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto eq = line.find(" = ");
    if (eq == std::string::npos) throw IoError("malformed report line in " + path);
    kv.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return kv;
}

Report recovery_report_kv(const recovery::RecoveryReport& rep) {
  Report kv;
  kv.emplace_back("regime", rep.has_cosmo ? "cosmological" : "flat");
  if (rep.has_cosmo) {
    kv.emplace_back("X", fmt(rep.X));
    kv.emplace_back("Y", fmt(rep.Y));
    kv.emplace_back("Z", fmt(rep.Z));
  } else {
    kv.emplace_back("c0", fmt(rep.c0));
    kv.emplace_back("m2", fmt(rep.m2));
  }
  kv.emplace_back("M", fmt(rep.M));
  kv.emplace_back("Q", fmt(rep.Q));
  kv.emplace_back("Lambda", fmt(rep.Lambda));
  kv.emplace_back("r0", fmt(rep.r0));
  kv.emplace_back("rplus", fmt(rep.rplus));
  kv.emplace_back("linear_system_det", fmt(rep.det));
  kv.emplace_back("linear_system_cond", fmt(rep.cond));
  kv.emplace_back("residual_F_r0", fmt(rep.residual_F0));
  kv.emplace_back("residual_F_rplus", fmt(rep.residual_Fp));
  kv.emplace_back("phase_fit_residual", fmt(rep.phase_fit_residual));
  kv.emplace_back("weights_used", std::to_string(rep.weights_used));
  return kv;
}

}  // namespace bhscat::cli
