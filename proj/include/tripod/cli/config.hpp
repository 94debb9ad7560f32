#pragma once

#include "tripod/model.hpp"
#include "tripod/protocol.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tripod::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { Efficiency, Convergence, Regime, Protocol, MaxwellBloch };
enum class Solver { Analytic, Goursat, MaxwellBloch };

const char* to_string(Experiment e);
const char* to_string(Solver s);

/// Effective configuration of one run. Reduced-model quantities are given in
/// units of pulse.tau_p: nu0 = nu0_tau_p / tau_p, zeta_L = zeta_L_over_tau_p * tau_p.
struct ExperimentConfig {
  std::string name = "custom";
  Experiment experiment = Experiment::Efficiency;
  Solver solver = Solver::Analytic;

  std::vector<double> nu0_tau_p{1.0};
  double beta = 0.7853981633974483;
  std::vector<double> zeta_L_over_tau_p{1.0};
  PulseSpec pulse;

  double tau_max = 10.0;           ///< in tau_p
  std::size_t tau_samples = 201;
  bool long_tail = false;
  double long_tail_max = 1000.0;   ///< in tau_p
  std::size_t long_tail_samples = 121;

  std::size_t grid_n_tau = 2048;
  std::size_t grid_n_zeta = 1024;
  bool richardson = true;
  double rel_tol = 1e-8;

  std::string out_dir = "out";

  // convergence
  std::vector<std::pair<std::size_t, std::size_t>> ladder{{128, 64}, {256, 128}, {512, 256}, {1024, 512}};
  std::size_t reference_n_tau = 16;
  std::size_t reference_n_zeta = 8;

  // regime
  double regime_tau = 3.0;  ///< in tau_p
  std::optional<double> optical_density;
  std::optional<double> delta_omega_eit;  ///< in 1/tau_p

  // protocol
  double storage_time = 0.0;  ///< in tau_p, 0 stores at the maximum
  protocol::SwitchKind switch_kind = protocol::SwitchKind::NuToZero;
  double retrieval_omega = 1.0;
  std::size_t protocol_n_zeta = 400;

  // Maxwell-Bloch (physical units)
  MediumParams medium;
  std::size_t mb_n_z = 100;
  double mb_dt = 0.0;
  double mb_duration = 10.0;  ///< in tau_p
  std::size_t mb_output_stride = 1000;

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& c);
/// Strict parse: unknown keys and wrong types raise ConfigError. Keys not
/// given keep their defaults (or those of "preset" when present).
ExperimentConfig from_json(const nlohmann::json& j);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
ExperimentConfig preset(const std::string& name);

/// A preset name or a path to a JSON file.
ExperimentConfig load_config(const std::string& preset_or_path);

struct Overrides {
  std::optional<std::string> solver;
  std::optional<std::string> out_dir;
  bool long_tail = false;
  std::optional<std::string> grid;  ///< "NxM": N tau intervals, M zeta intervals
  std::optional<double> tol;
};

void apply_overrides(ExperimentConfig& c, const Overrides& o);

Solver parse_solver(const std::string& s);

}  // namespace tripod::cli
