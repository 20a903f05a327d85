#pragma once

// JSON run configuration shared by the CLI, the C API and the recipes.
// Parsing is strict: unknown keys and wrong types raise ConfigError naming the
// offending key.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringsim/drive_response.hpp"
#include "ringsim/meanfield.hpp"
#include "ringsim/toymodel.hpp"

namespace ringsim {

class ConfigError : public InvalidArgument {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : InvalidArgument("config key '" + key + "': " + message), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// One physical operating point. Unset gamma_T / detuning mean "dark": Γ_T is
/// the width of the darkest impurity-coupled mode at Γ_T = 0 and the drive
/// sits on the frequency of the darkest coupled mode once Γ_T is included.
struct ModelPoint {
  int n_ring = 9;
  double lambda_over_d = 20.0;
  double delta_I = 0.0;
  double gamma_I = 1.0;
  std::optional<double> gamma_T;
  Polarization polarization = Polarization::circular_inplane();
  DriveKind drive_kind = DriveKind::coherent;
  double amplitude = 1e-3;
  std::optional<double> detuning;
  Vec3 k_hat = Vec3::UnitZ();
  IlluminationMask mask = IlluminationMask::all;

  /// Ring (or the bare impurity for n_ring = 0) with the given trap rate.
  SystemConfig system(double gamma_T) const;
  DriveSpec drive(double detuning) const;
};

struct SpectrumRange {
  double min = -2.0;
  double max = 2.0;
  int points = 401;
};

enum class Metric { sigma_abs_coherent, sigma_abs_incoherent, dark_gamma, impurity_weight };
enum class Model { quantum, meanfield, toymodel };
enum class FreeParameter { delta_I, gamma_I };

const char* metric_name(Metric m);
const char* model_name(Model m);
const char* parameter_name(FreeParameter p);

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct GridSpec {
  std::vector<SweepAxis> axes;
  Metric metric = Metric::sigma_abs_coherent;
  Model model = Model::quantum;
  /// Optimize this impurity parameter at every point before evaluating.
  std::optional<FreeParameter> optimize;
};

struct OptimizeSpec {
  FreeParameter parameter = FreeParameter::delta_I;
  double bracket = 0.0;  // half width around the seed; 0 picks a default
  double tolerance = 1e-4;
  int coarse_points = 201;
};

struct MeanFieldSpec {
  MeanFieldVariant variant = MeanFieldVariant::rederived;
  double rabi = 5e-4;
  double t_max = 2e5;
};

// transfer_rate: weak-drive Γ_l⟨σ_c^ee⟩/Ω² over the detuning range.
// target_population: P_t(t_fix) over the range, one block per bandwidth.
// time_curve: P_t(t) up to t_fix at the centre of the range, `points` samples.
enum class ToyOutput { transfer_rate, target_population, time_curve };

struct ToySpec {
  double n_eff = 9.0;
  double distance = 0.1;  // in λ0
  double gamma_l = 1.0;
  AntennaDecayScaling scaling = AntennaDecayScaling::linear;
  PumpScenario scenario = PumpScenario::collective;
  double rabi = 0.1;
  SpectrumRange detunings{-15.0, 15.0, 601};
  std::vector<double> bandwidths{0.0};
  double t_fix = 20.0;
  ToyOutput output = ToyOutput::transfer_rate;

  ToyConfig config() const;
};

struct RunConfig {
  ModelPoint point;
  SpectrumRange spectrum;
  GridSpec grid;
  OptimizeSpec optimize;
  MeanFieldSpec meanfield;
  ToySpec toy;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Complete, resolved configuration (all defaults filled in).
nlohmann::json config_to_json(const RunConfig& config);
/// Hash of the canonical (sorted-key, compact) JSON form.
std::string config_hash(const RunConfig& config);

/// Axis names accepted by sweeps: N, lambda_over_d, delta_I, gamma_I, gamma_T,
/// delta_drive, and for the toy model n_eff and distance.
bool is_known_axis(const std::string& name);

/// n equally spaced values from start to stop inclusive (n = 1 gives start).
std::vector<double> linspace(double start, double stop, int n);
/// n logarithmically spaced values; start and stop must be positive.
std::vector<double> logspace(double start, double stop, int n);

}  // namespace ringsim
