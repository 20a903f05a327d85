#include "ringsim/recipes.hpp"

#include <chrono>

namespace ringsim {
namespace {

SweepAxis axis_n(int lo, int hi) {
  SweepAxis a{"N", {}};
  for (int n = lo; n <= hi; ++n) a.values.push_back(n);
  return a;
}

RunConfig base(Metric metric, std::vector<SweepAxis> axes) {
  RunConfig c;
  c.grid.metric = metric;
  c.grid.axes = std::move(axes);
  return c;
}

}  // namespace

const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names = {"fig1a", "fig1c", "fig1d", "fig2a",
                                                 "fig2b", "fig2c", "fig2d", "fig3a",
                                                 "fig3b", "figA21", "figA22"};
  return names;
}

Recipe make_recipe(const std::string& name) {
  Recipe r;
  r.name = name;
  const SweepAxis lod_wide{"lambda_over_d", linspace(2.0, 40.0, 77)};
  if (name == "fig1a") {
    r.figure = "Fig. 1(a),(b)";
    r.description = "Decay rate of the darkest impurity-coupled mode and its impurity population versus N "
                    "and lambda/d; identical emitters, no trap.";
    r.expected_features = {"dark_gamma is smallest at N = 9 for large lambda/d, below 1e-3 at lambda/d = 20",
                           "impurity_weight of the dark mode stays large along the N = 9 column"};
    r.runs.push_back(base(Metric::dark_gamma, {axis_n(4, 16), lod_wide}));
    r.runs.back().point.gamma_T = 0.0;
    r.runs.back().point.detuning = 0.0;
  } else if (name == "fig1c") {
    r.figure = "Fig. 1(c)";
    r.description = "Coherent absorption cross section at the dark resonance (trap rate equal to the dark "
                    "width, drive on the dark-mode frequency) versus N and lambda/d.";
    r.expected_features = {"sigma_abs_over_quarter_sigma peaks at N = 9 in the subwavelength regime",
                           "enhancement above the single-emitter maximum (ratio > 1) for N = 9, lambda/d >= 5"};
    r.runs.push_back(base(Metric::sigma_abs_coherent, {axis_n(4, 16), lod_wide}));
  } else if (name == "fig1d") {
    r.figure = "Fig. 1(d)";
    r.description = "N = 9: coherent absorption cross section versus drive detuning and lambda/d, trap rate "
                    "equal to the dark width.";
    r.expected_features = {"a narrow resonance on the dark-mode frequency emerges for lambda/d >~ 5",
                           "peak ratio to sigma/4 exceeds 1 on that resonance"};
    r.runs.push_back(base(Metric::sigma_abs_coherent,
                          {{"lambda_over_d", linspace(2.0, 12.0, 41)}, {"delta_drive", linspace(-1.0, 2.0, 1201)}}));
  } else if (name == "fig2a") {
    r.figure = "Fig. 2(a)";
    r.description = "Coherent absorption at the dark resonance versus N and impurity detuning delta_I, "
                    "gamma_I = 1, lambda/d = 20.";
    r.expected_features = {"a ridge of maximal absorption follows the dark-state condition (see eq4_prediction)",
                           "ridge maxima exceed the single-emitter value for every N"};
    r.runs.push_back(base(Metric::sigma_abs_coherent, {axis_n(3, 16), {"delta_I", linspace(-110.0, 30.0, 2801)}}));
  } else if (name == "fig2b") {
    r.figure = "Fig. 2(b)";
    r.description = "Coherent absorption at the dark resonance versus N and impurity decay rate gamma_I, "
                    "delta_I = 0, lambda/d = 20.";
    r.expected_features = {"maximal absorption along the dark-state condition solved for gamma_I",
                           "for N >= 10 the condition needs gamma_I <= 0 and no ridge appears"};
    r.runs.push_back(base(Metric::sigma_abs_coherent, {axis_n(3, 16), {"gamma_I", linspace(0.02, 5.0, 250)}}));
  } else if (name == "fig2c" || name == "fig2d") {
    const bool c = name == "fig2c";
    r.figure = c ? "Fig. 2(c)" : "Fig. 2(d)";
    r.description = c ? "Dark-mode decay rate versus N and lambda/d with delta_I optimized for absorption, "
                        "gamma_I = 1."
                      : "Coherent absorption versus N and lambda/d with delta_I optimized, gamma_I = 1.";
    r.expected_features = {c ? "dark_gamma is suppressed for every N once delta_I is optimized"
                             : "sigma_abs_over_quarter_sigma > 1 for N >= 3 in the subwavelength regime",
                           "lambda/R = 1 at lambda/d = 1/(2 sin(pi/N))"};
    r.runs.push_back(base(c ? Metric::dark_gamma : Metric::sigma_abs_coherent,
                          {axis_n(3, 16), {"lambda_over_d", linspace(2.0, 40.0, 39)}}));
    r.runs.back().grid.optimize = FreeParameter::delta_I;
  } else if (name == "fig3a") {
    r.figure = "Fig. 3(a)";
    r.description = "Incoherent absorption relative to a single emitter with the same trap, versus N and "
                    "gamma_T, lambda/d = 40.";
    r.expected_features = {"sigma_abs_over_single is maximal at N = 9 for small gamma_T",
                           "the advantage disappears as gamma_T approaches Gamma0"};
    r.runs.push_back(base(Metric::sigma_abs_incoherent, {axis_n(4, 16), {"gamma_T", logspace(1e-6, 1.0, 61)}}));
    r.runs.back().point.lambda_over_d = 40.0;
    r.runs.back().point.drive_kind = DriveKind::incoherent;
  } else if (name == "fig3b") {
    r.figure = "Fig. 3(b)";
    r.description = "Incoherent absorption relative to a single emitter versus N and lambda/d, "
                    "gamma_T = 1e-4.";
    r.expected_features = {"sigma_abs_over_single becomes maximal again at N = 9 for large lambda/d"};
    r.runs.push_back(base(Metric::sigma_abs_incoherent, {axis_n(4, 16), lod_wide}));
    r.runs.back().point.gamma_T = 1e-4;
    r.runs.back().point.drive_kind = DriveKind::incoherent;
  } else if (name == "figA21" || name == "figA22") {
    const bool map = name == "figA21";
    r.figure = map ? "Fig. A2_1" : "Fig. A2_2";
    r.description = map ? "Coherent absorption at the dark resonance from the quantum linear response and "
                          "from the mean-field model, versus N and lambda/d."
                        : "N = 9 cut of the quantum and mean-field absorption versus lambda/d, Rabi "
                          "frequency 5e-4.";
    r.expected_features = {"quantum and mean-field agree within 15% for lambda/d <= 5",
                           "the quantum cross section is larger than the mean-field one for lambda/d > 8"};
    std::vector<SweepAxis> axes;
    if (map) axes.push_back(axis_n(4, 16));
    axes.push_back({"lambda_over_d", map ? linspace(2.0, 20.0, 19) : linspace(2.0, 20.0, 73)});
    RunConfig q = base(Metric::sigma_abs_coherent, axes);
    q.meanfield.rabi = 5e-4;
    q.point.amplitude = 5e-4;
    RunConfig m = q;
    m.grid.model = Model::meanfield;
    r.runs = {q, m};
  } else {
    std::string known;
    for (const auto& n : recipe_names()) known += (known.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown recipe '" + name + "' (known: " + known + ")");
  }
  return r;
}

nlohmann::json make_sidecar(const std::string& command, const RunConfig& config, double wall_seconds,
                            int rows) {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["schema"] = kTableSchema;
  j["config"] = config_to_json(config);
  j["config_hash"] = config_hash(config);
  j["wall_time_s"] = wall_seconds;
  j["rows"] = rows;
  return j;
}

RunOutput run_recipe(const std::string& name, const SweepOptions& options) {
  const Recipe r = make_recipe(name);
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out;
  nlohmann::json configs = nlohmann::json::array();
  std::string hashes;
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    Table t = run_sweep(r.runs[i], options);
    hashes += (i ? "," : "") + config_hash(r.runs[i]);
    configs.push_back(config_to_json(r.runs[i]));
    if (i == 0) {
      out.table = std::move(t);
    } else {
      out.table.append(t);
    }
  }
  out.table.set_meta("command", "reproduce " + name);
  out.table.set_meta("config_hash", hash_hex(hashes));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::json& s = out.sidecar;
  s["command"] = "reproduce";
  s["recipe"] = r.name;
  s["figure"] = r.figure;
  s["description"] = r.description;
  s["expected_features"] = r.expected_features;
  s["version"] = kVersion;
  s["schema"] = kTableSchema;
  s["configs"] = configs;
  s["config_hash"] = hash_hex(hashes);
  s["wall_time_s"] = wall;
  s["rows"] = out.table.row_count();
  if (name == "fig2a" || name == "fig2b") {
    const FreeParameter p = name == "fig2a" ? FreeParameter::delta_I : FreeParameter::gamma_I;
    nlohmann::json pred = nlohmann::json::object();
    for (int n = 3; n <= 16; ++n) {
      ModelPoint point = r.runs.front().point;
      point.n_ring = n;
      pred[std::to_string(n)] = optimizer_seed(p, point);
    }
    s["dark_condition_prediction"] = {{"parameter", parameter_name(p)}, {"by_N", pred}};
  }
  return out;
}

}  // namespace ringsim
