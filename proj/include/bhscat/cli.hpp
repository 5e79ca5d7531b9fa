// Batch front end plumbing: run configuration (JSON), comma-separated
// sweep tables, pairing tables, and key = value report files. All numeric
// knobs of a run live in RunConfig; the writers use full precision so that
// a write/read round trip is the identity.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bhscat/geometry.hpp"
#include "bhscat/jost.hpp"
#include "bhscat/recovery.hpp"
#include "bhscat/reduction.hpp"

namespace bhscat::cli {

struct Tolerances {
  double quadrature = 1e-6;   // integral-identity relative error gate
  double ode = 1e-8;          // propagator self-consistency gate
  double iteration = 1e-9;    // inverse solver residual
  double unitarity = 1e-6;    // scattering unitarity-defect gate

  void validate() const;  // each must lie in (0, 1)
};

struct RunConfig {
  geometry::BlackHoleParams bh;
  reduction::FieldParams field;
  std::vector<int> weights{1, 2};

  // scattering sweep grid
  double xi_min = -6.0, xi_max = 6.0;
  int xi_count = 1201;

  // spatial grid policy: x_max = 0 means automatic from the tail tolerance
  double x_step = 0.05;
  double x_max = 0.0;
  double tail_tol = 1e-12;

  // high-energy scan
  std::vector<double> lambdas{50, 100, 200};
  std::vector<double> shifts{0.0, 0.5, 1.0, 1.5, 2.0};

  // inverse-problem windows
  double alpha_max = 250.0, h_alpha = 0.1;
  double inv_x_lo = -40.0, inv_x_hi = 50.0, inv_dx = 1.0;

  Tolerances tol;
  std::string out_dir = ".";
  unsigned seed = 1;
  bool synthetic_zero = false;  // replace the potential by k = 0 (forward mode)

  void validate() const;  // throws ConfigError naming the offending field
};

// Reads a JSON config. Unreadable file -> IoError; malformed JSON or
// invariant violation -> ConfigError.
RunConfig load_config(const std::string& path);

// "name=value" with name in {quadrature, ode, iteration, unitarity}.
void apply_tolerance_override(Tolerances& tol, const std::string& entry);

// Scattering sweep tables: one row per xi with the four 2x2 blocks
// (real/imaginary parts) and the defect diagnostics.
void write_scattering_table(const std::string& path,
                            const std::vector<jost::ScatteringMatrix>& tab);
std::vector<jost::ScatteringMatrix> read_scattering_table(const std::string& path);

// Pairing tables: rows (weight, shift, lambda, Re F, Im F).
void write_pairing_table(const std::string& path, const recovery::PairingData& data);
recovery::PairingData read_pairing_table(const std::string& path);

// Flat-regime reconstruction data: rows (x, Re Theta, Im Theta, then per
// weight Re A_w, Im A_w).
struct ReconstructionTable {
  std::vector<int> weights;
  std::vector<double> x;
  std::vector<cplx> theta;
  std::vector<std::vector<cplx>> A;  // A[weight][sample]
};
void write_reconstruction_table(const std::string& path, const ReconstructionTable& t);
ReconstructionTable read_reconstruction_table(const std::string& path);

// Plain "key = value" report files.
using Report = std::vector<std::pair<std::string, std::string>>;
void write_report(const std::string& path, const Report& kv);
Report read_report(const std::string& path);
std::string fmt(double v);  // full-precision number formatting used throughout

Report recovery_report_kv(const recovery::RecoveryReport& rep);

}  // namespace bhscat::cli
