#include "ringsim/config_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ringsim/table.hpp"

namespace ringsim {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(const std::string& name) const { return path_.empty() ? name : path_ + "." + name; }

  const json* find(const std::string& name) {
    auto it = j_.find(name);
    if (it == j_.end()) return nullptr;
    used_.insert(name);
    return &*it;
  }

  void number(const std::string& name, double& out) {
    if (const json* v = find(name)) out = as_number(*v, key(name));
  }

  void integer(const std::string& name, int& out) {
    if (const json* v = find(name)) out = as_integer(*v, key(name));
  }

  // Number or the string "dark" (stored as nullopt).
  void number_or_dark(const std::string& name, std::optional<double>& out) {
    const json* v = find(name);
    if (!v) return;
    if (v->is_string()) {
      if (v->get<std::string>() != "dark") throw ConfigError(key(name), "expected a number or \"dark\"");
      out.reset();
      return;
    }
    out = as_number(*v, key(name));
  }

  template <class E>
  void choice(const std::string& name, E& out, const std::vector<std::pair<const char*, E>>& options) {
    const json* v = find(name);
    if (!v) return;
    std::string allowed;
    for (const auto& [label, value] : options) {
      if (v->is_string() && v->get<std::string>() == label) {
        out = value;
        return;
      }
      allowed += allowed.empty() ? label : std::string(", ") + label;
    }
    throw ConfigError(key(name), "expected one of: " + allowed);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(key, "must be finite");
    return d;
  }

  static int as_integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    const long long i = v.get<long long>();
    if (i < -2147483647LL || i > 2147483647LL) throw ConfigError(key, "integer out of range");
    return static_cast<int>(i);
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

CVec3 read_cvec3(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(key, "expected three components");
  CVec3 out;
  for (int i = 0; i < 3; ++i) {
    const json& c = v[i];
    const std::string ck = key + "[" + std::to_string(i) + "]";
    if (c.is_number()) {
      out(i) = ObjectReader::as_number(c, ck);
    } else if (c.is_array() && c.size() == 2) {
      out(i) = cplx(ObjectReader::as_number(c[0], ck), ObjectReader::as_number(c[1], ck));
    } else {
      throw ConfigError(ck, "expected a number or a [re, im] pair");
    }
  }
  return out;
}

void read_range(ObjectReader& r, SpectrumRange& out, const char* min_key, const char* max_key,
                const char* points_key) {
  r.number(min_key, out.min);
  r.number(max_key, out.max);
  r.integer(points_key, out.points);
  if (out.points < 1) throw ConfigError(r.key(points_key), "must be at least 1");
  if (out.points > 1 && !(out.max > out.min)) throw ConfigError(r.key(max_key), "must exceed the minimum");
}

void read_drive(const json& j, ModelPoint& p) {
  ObjectReader r(j, "drive");
  r.choice<DriveKind>("kind", p.drive_kind,
                      {{"coherent", DriveKind::coherent}, {"incoherent", DriveKind::incoherent}});
  r.number("amplitude", p.amplitude);
  if (!(p.amplitude >= 0.0)) throw ConfigError("drive.amplitude", "must be non-negative");
  r.number_or_dark("detuning", p.detuning);
  if (const json* v = r.find("k_hat")) {
    const CVec3 k = read_cvec3(*v, "drive.k_hat");
    if (k.imag().norm() != 0.0 || k.real().norm() == 0.0) {
      throw ConfigError("drive.k_hat", "expected a non-zero real vector");
    }
    p.k_hat = k.real().normalized();
  }
  r.choice<IlluminationMask>("mask", p.mask,
                             {{"all", IlluminationMask::all},
                              {"ring_only", IlluminationMask::ring_only},
                              {"center_only", IlluminationMask::center_only}});
  r.finish();
}

SweepAxis read_axis(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SweepAxis axis;
  const json* name = r.find("name");
  if (!name || !name->is_string()) throw ConfigError(r.key("name"), "expected an axis name");
  axis.name = name->get<std::string>();
  if (!is_known_axis(axis.name)) throw ConfigError(r.key("name"), "unknown axis '" + axis.name + "'");
  if (const json* v = r.find("values")) {
    if (!v->is_array() || v->empty()) throw ConfigError(r.key("values"), "expected a non-empty array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      axis.values.push_back(
          ObjectReader::as_number((*v)[i], r.key("values") + "[" + std::to_string(i) + "]"));
    }
  } else {
    const json* start = r.find("start");
    const json* stop = r.find("stop");
    const json* num = r.find("num");
    if (!start || !stop || !num) throw ConfigError(path, "expected 'values' or 'start', 'stop' and 'num'");
    const double a = ObjectReader::as_number(*start, r.key("start"));
    const double b = ObjectReader::as_number(*stop, r.key("stop"));
    const int n = ObjectReader::as_integer(*num, r.key("num"));
    if (n < 1) throw ConfigError(r.key("num"), "must be at least 1");
    bool log = false;
    if (const json* s = r.find("spacing")) {
      if (*s == "log") {
        log = true;
      } else if (*s != "linear") {
        throw ConfigError(r.key("spacing"), "expected \"linear\" or \"log\"");
      }
    }
    if (log && !(a > 0.0 && b > 0.0)) throw ConfigError(r.key("start"), "log spacing needs positive bounds");
    axis.values = log ? logspace(a, b, n) : linspace(a, b, n);
  }
  r.finish();
  return axis;
}

void read_grid(const json& j, GridSpec& g) {
  ObjectReader r(j, "grid");
  if (const json* axes = r.find("axes")) {
    if (!axes->is_array()) throw ConfigError("grid.axes", "expected an array");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < axes->size(); ++i) {
      SweepAxis a = read_axis((*axes)[i], "grid.axes[" + std::to_string(i) + "]");
      if (!seen.insert(a.name).second) {
        throw ConfigError("grid.axes[" + std::to_string(i) + "].name", "duplicate axis '" + a.name + "'");
      }
      g.axes.push_back(std::move(a));
    }
  }
  r.choice<Metric>("metric", g.metric,
                   {{"sigma_abs_coherent", Metric::sigma_abs_coherent},
                    {"sigma_abs_incoherent", Metric::sigma_abs_incoherent},
                    {"dark_gamma", Metric::dark_gamma},
                    {"impurity_weight", Metric::impurity_weight}});
  r.choice<Model>("model", g.model,
                  {{"quantum", Model::quantum}, {"meanfield", Model::meanfield}, {"toymodel", Model::toymodel}});
  if (const json* v = r.find("optimize")) {
    if (*v == "none") {
      g.optimize.reset();
    } else if (*v == "delta_I") {
      g.optimize = FreeParameter::delta_I;
    } else if (*v == "gamma_I") {
      g.optimize = FreeParameter::gamma_I;
    } else {
      throw ConfigError("grid.optimize", "expected one of: none, delta_I, gamma_I");
    }
  }
  r.finish();
}

void read_toy(const json& j, ToySpec& t) {
  ObjectReader r(j, "toy");
  r.number("n_eff", t.n_eff);
  r.number("distance", t.distance);
  r.number("gamma_l", t.gamma_l);
  r.choice<AntennaDecayScaling>("scaling", t.scaling,
                                {{"linear", AntennaDecayScaling::linear},
                                 {"quadratic", AntennaDecayScaling::quadratic}});
  r.choice<PumpScenario>("scenario", t.scenario,
                         {{"antenna", PumpScenario::antenna},
                          {"center", PumpScenario::center},
                          {"collective", PumpScenario::collective}});
  r.number("rabi", t.rabi);
  read_range(r, t.detunings, "detuning_min", "detuning_max", "points");
  if (const json* v = r.find("bandwidths")) {
    if (!v->is_array() || v->empty()) throw ConfigError("toy.bandwidths", "expected a non-empty array");
    t.bandwidths.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const double b = ObjectReader::as_number((*v)[i], "toy.bandwidths[" + std::to_string(i) + "]");
      if (b < 0.0) throw ConfigError("toy.bandwidths[" + std::to_string(i) + "]", "must be non-negative");
      t.bandwidths.push_back(b);
    }
  }
  r.number("t_fix", t.t_fix);
  r.choice<ToyOutput>("output", t.output,
                      {{"transfer_rate", ToyOutput::transfer_rate},
                       {"target_population", ToyOutput::target_population},
                       {"time_curve", ToyOutput::time_curve}});
  r.finish();
  if (!(t.n_eff >= 1.0)) throw ConfigError("toy.n_eff", "must be at least 1");
  if (!(t.distance > 0.0)) throw ConfigError("toy.distance", "must be positive");
  if (!(t.gamma_l >= 0.0)) throw ConfigError("toy.gamma_l", "must be non-negative");
  if (!(t.t_fix > 0.0)) throw ConfigError("toy.t_fix", "must be positive");
}

json cvec_json(const CVec3& v) {
  json out = json::array();
  for (int i = 0; i < 3; ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json range_json(const SpectrumRange& s) { return {{"min", s.min}, {"max", s.max}, {"points", s.points}}; }

}  // namespace

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::sigma_abs_coherent: return "sigma_abs_coherent";
    case Metric::sigma_abs_incoherent: return "sigma_abs_incoherent";
    case Metric::dark_gamma: return "dark_gamma";
    case Metric::impurity_weight: return "impurity_weight";
  }
  return "?";
}

const char* model_name(Model m) {
  switch (m) {
    case Model::quantum: return "quantum";
    case Model::meanfield: return "meanfield";
    case Model::toymodel: return "toymodel";
  }
  return "?";
}

const char* parameter_name(FreeParameter p) {
  return p == FreeParameter::delta_I ? "delta_I" : "gamma_I";
}

SystemConfig ModelPoint::system(double gamma_T) const {
  ImpuritySpec imp;
  imp.delta_I = delta_I;
  imp.gamma_I = gamma_I;
  imp.gamma_T = gamma_T;
  imp.polarization = polarization;
  SystemConfig c = n_ring == 0 ? SystemConfig::impurity_only(imp)
                               : SystemConfig::ring(n_ring, lambda_over_d, imp);
  c.ring_polarization = polarization;
  return c;
}

DriveSpec ModelPoint::drive(double detuning_value) const {
  DriveSpec d = drive_kind == DriveKind::coherent ? DriveSpec::coherent(amplitude, detuning_value, mask)
                                                   : DriveSpec::incoherent(amplitude, mask);
  d.k_hat = k_hat;
  return d;
}

ToyConfig ToySpec::config() const {
  ToyConfig c = ToyConfig::from_distance(n_eff, distance, gamma_l, scaling);
  c.drive.rabi = rabi;
  c.drive.mask = scenario;
  c.drive.bandwidth = bandwidths.empty() ? 0.0 : bandwidths.front();
  return c;
}

bool is_known_axis(const std::string& name) {
  static const std::set<std::string> known = {"N",       "lambda_over_d", "delta_I",
                                              "gamma_I", "gamma_T",       "delta_drive",
                                              "n_eff",   "distance"};
  return known.count(name) > 0;
}

std::vector<double> linspace(double start, double stop, int n) {
  std::vector<double> v;
  if (n == 1) return {start};
  for (int i = 0; i < n; ++i) v.push_back(i == n - 1 ? stop : start + (stop - start) * i / (n - 1));
  return v;
}

std::vector<double> logspace(double start, double stop, int n) {
  if (!(start > 0.0) || !(stop > 0.0) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw InvalidArgument("logarithmic spacing needs finite positive end points");
  }
  std::vector<double> v;
  for (double e : linspace(std::log10(start), std::log10(stop), n)) v.push_back(std::pow(10.0, e));
  v.front() = start;
  v.back() = stop;
  return v;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  RunConfig c;
  ModelPoint& p = c.point;
  ObjectReader r(j, "");
  r.integer("n_ring", p.n_ring);
  if (p.n_ring < 0) throw ConfigError("n_ring", "must be non-negative");
  r.number("lambda_over_d", p.lambda_over_d);
  if (!(p.lambda_over_d > 0.0)) throw ConfigError("lambda_over_d", "must be positive");
  r.number("delta_I", p.delta_I);
  r.number("gamma_I", p.gamma_I);
  if (!(p.gamma_I > 0.0)) throw ConfigError("gamma_I", "must be positive");
  r.number_or_dark("gamma_T", p.gamma_T);
  if (p.gamma_T && *p.gamma_T < 0.0) throw ConfigError("gamma_T", "must be non-negative");
  if (const json* v = r.find("polarization")) {
    if (*v == "circular") {
      p.polarization = Polarization::circular_inplane();
    } else if (v->is_array()) {
      try {
        p.polarization = Polarization::from_vector(read_cvec3(*v, "polarization"));
      } catch (const ConfigError&) {
        throw;
      } catch (const InvalidArgument& e) {
        throw ConfigError("polarization", e.what());
      }
    } else {
      throw ConfigError("polarization", "expected \"circular\" or three complex components");
    }
  }
  if (const json* v = r.find("drive")) read_drive(*v, p);
  if (const json* v = r.find("spectrum")) {
    ObjectReader s(*v, "spectrum");
    read_range(s, c.spectrum, "min", "max", "points");
    s.finish();
  }
  if (const json* v = r.find("grid")) read_grid(*v, c.grid);
  if (const json* v = r.find("optimize")) {
    ObjectReader o(*v, "optimize");
    o.choice<FreeParameter>("parameter", c.optimize.parameter,
                            {{"delta_I", FreeParameter::delta_I}, {"gamma_I", FreeParameter::gamma_I}});
    o.number("bracket", c.optimize.bracket);
    o.number("tolerance", c.optimize.tolerance);
    o.integer("coarse_points", c.optimize.coarse_points);
    o.finish();
    if (c.optimize.bracket < 0.0) throw ConfigError("optimize.bracket", "must be non-negative");
    if (!(c.optimize.tolerance > 0.0)) throw ConfigError("optimize.tolerance", "must be positive");
    if (c.optimize.coarse_points < 5) throw ConfigError("optimize.coarse_points", "must be at least 5");
  }
  if (const json* v = r.find("meanfield")) {
    ObjectReader m(*v, "meanfield");
    m.choice<MeanFieldVariant>("variant", c.meanfield.variant,
                               {{"rederived", MeanFieldVariant::rederived},
                                {"paper", MeanFieldVariant::paper}});
    m.number("rabi", c.meanfield.rabi);
    m.number("t_max", c.meanfield.t_max);
    m.finish();
    if (!(c.meanfield.rabi >= 0.0)) throw ConfigError("meanfield.rabi", "must be non-negative");
    if (!(c.meanfield.t_max > 0.0)) throw ConfigError("meanfield.t_max", "must be positive");
  }
  if (const json* v = r.find("toy")) read_toy(*v, c.toy);
  r.finish();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

json config_to_json(const RunConfig& c) {
  const ModelPoint& p = c.point;
  json j;
  j["n_ring"] = p.n_ring;
  j["lambda_over_d"] = p.lambda_over_d;
  j["delta_I"] = p.delta_I;
  j["gamma_I"] = p.gamma_I;
  j["gamma_T"] = p.gamma_T ? json(*p.gamma_T) : json("dark");
  j["polarization"] = p.polarization.is_circular_inplane() ? json("circular") : cvec_json(p.polarization.vector());
  const char* masks[] = {"all", "ring_only", "center_only"};
  j["drive"] = {{"kind", p.drive_kind == DriveKind::coherent ? "coherent" : "incoherent"},
                {"amplitude", p.amplitude},
                {"detuning", p.detuning ? json(*p.detuning) : json("dark")},
                {"k_hat", {p.k_hat.x(), p.k_hat.y(), p.k_hat.z()}},
                {"mask", masks[static_cast<int>(p.mask)]}};
  j["spectrum"] = range_json(c.spectrum);
  json axes = json::array();
  for (const auto& a : c.grid.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
  j["grid"] = {{"axes", axes},
               {"metric", metric_name(c.grid.metric)},
               {"model", model_name(c.grid.model)},
               {"optimize", c.grid.optimize ? parameter_name(*c.grid.optimize) : "none"}};
  j["optimize"] = {{"parameter", parameter_name(c.optimize.parameter)},
                   {"bracket", c.optimize.bracket},
                   {"tolerance", c.optimize.tolerance},
                   {"coarse_points", c.optimize.coarse_points}};
  j["meanfield"] = {{"variant", c.meanfield.variant == MeanFieldVariant::paper ? "paper" : "rederived"},
                    {"rabi", c.meanfield.rabi},
                    {"t_max", c.meanfield.t_max}};
  const char* outputs[] = {"transfer_rate", "target_population", "time_curve"};
  j["toy"] = {{"n_eff", c.toy.n_eff},
              {"distance", c.toy.distance},
              {"gamma_l", c.toy.gamma_l},
              {"scaling", c.toy.scaling == AntennaDecayScaling::linear ? "linear" : "quadratic"},
              {"scenario", scenario_name(c.toy.scenario)},
              {"rabi", c.toy.rabi},
              {"detuning_min", c.toy.detunings.min},
              {"detuning_max", c.toy.detunings.max},
              {"points", c.toy.detunings.points},
              {"bandwidths", c.toy.bandwidths},
              {"t_fix", c.toy.t_fix},
              {"output", outputs[static_cast<int>(c.toy.output)]}};
  return j;
}

std::string config_hash(const RunConfig& c) { return hash_hex(config_to_json(c).dump()); }

}  // namespace ringsim
