#include "ringsim/ringsim.h"

#include <cstdlib>
#include <cstring>
#include <functional>
#include <fstream>
#include <new>

#include "ringsim/commands.hpp"

struct rs_config {
  ringsim::RunConfig config;
};

struct rs_result {
  ringsim::Table table;
  std::string sidecar;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_key;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

rs_status fail(rs_status s, const std::string& msg, const std::string& key = {}) {
  g_error = msg;
  g_error_key = key;
  return s;
}

template <class F>
rs_status guard(F&& f) {
  try {
    f();
    return RS_OK;
  } catch (const ringsim::ConfigError& e) {
    return fail(RS_ERR_CONFIG, e.what(), e.key());
  } catch (const ringsim::InvalidArgument& e) {
    return fail(RS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const ringsim::SolverError& e) {
    return fail(RS_ERR_SOLVER, e.what());
  } catch (const IoError& e) {
    return fail(RS_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RS_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(const void* p, const char* what) {
  if (!p) throw ringsim::InvalidArgument(std::string(what) + " must not be NULL");
}

rs_status wrap_result(rs_result** out, const std::function<ringsim::RunOutput()>& run) {
  return guard([&] {
    require(out, "out");
    *out = nullptr;
    ringsim::RunOutput r = run();
    *out = new rs_result{std::move(r.table), r.sidecar.dump(2) + "\n"};
  });
}

ringsim::SweepOptions sweep_options(int threads, int oracle) {
  ringsim::SweepOptions o;
  o.threads = threads > 0 ? threads : 0;
  o.oracle = oracle != 0;
  return o;
}

}  // namespace

extern "C" {

const char* rs_version(void) { return ringsim::kVersion; }

const char* rs_status_name(rs_status status) {
  switch (status) {
    case RS_OK: return "ok";
    case RS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RS_ERR_CONFIG: return "configuration error";
    case RS_ERR_SOLVER: return "solver error";
    case RS_ERR_IO: return "i/o error";
    case RS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* rs_last_error(void) { return g_error.c_str(); }
const char* rs_last_error_key(void) { return g_error_key.c_str(); }
void rs_string_free(char* s) { std::free(s); }

rs_status rs_config_default(rs_config** out) {
  return guard([&] {
    require(out, "out");
    *out = new rs_config{};
  });
}

rs_status rs_config_parse(const char* json, rs_config** out) {
  return guard([&] {
    require(out, "out");
    *out = nullptr;
    require(json, "json");
    *out = new rs_config{ringsim::parse_config(json)};
  });
}

rs_status rs_config_load(const char* path, rs_config** out) {
  return guard([&] {
    require(out, "out");
    *out = nullptr;
    require(path, "path");
    if (!std::ifstream(path)) throw IoError(std::string("cannot open ") + path);
    *out = new rs_config{ringsim::load_config(path)};
  });
}

rs_status rs_config_to_json(const rs_config* config, char** out) {
  return guard([&] {
    require(config, "config");
    require(out, "out");
    *out = dup_string(ringsim::config_to_json(config->config).dump(2) + "\n");
  });
}

void rs_config_free(rs_config* config) { delete config; }

rs_status rs_dark_mode(const rs_config* config, double* decay_rate, double* frequency,
                       double* impurity_weight) {
  return guard([&] {
    require(config, "config");
    ringsim::ModelPoint p = config->config.point;
    p.gamma_T = 0.0;
    const ringsim::OperatingPoint op = ringsim::operating_point(p);
    if (decay_rate) *decay_rate = op.mode.decay_rate;
    if (frequency) *frequency = op.mode.frequency;
    if (impurity_weight) *impurity_weight = op.mode.impurity_weight;
  });
}

rs_status rs_sigma_abs(const rs_config* config, double* sigma_abs_over_sigma) {
  return guard([&] {
    require(config, "config");
    require(sigma_abs_over_sigma, "sigma_abs_over_sigma");
    *sigma_abs_over_sigma =
        ringsim::point_sigma(ringsim::operating_point(config->config.point)).sigma_abs_over_sigma;
  });
}

rs_status rs_run_modes(const rs_config* config, rs_result** out) {
  return wrap_result(out, [&] {
    require(config, "config");
    return ringsim::command_modes(config->config);
  });
}

rs_status rs_run_spectrum(const rs_config* config, rs_result** out) {
  return wrap_result(out, [&] {
    require(config, "config");
    return ringsim::command_spectrum(config->config);
  });
}

rs_status rs_run_sweep(const rs_config* config, int threads, int oracle, rs_result** out) {
  return wrap_result(out, [&] {
    require(config, "config");
    return ringsim::command_sweep(config->config, sweep_options(threads, oracle));
  });
}

rs_status rs_run_optimize(const rs_config* config, rs_result** out) {
  return wrap_result(out, [&] {
    require(config, "config");
    return ringsim::command_optimize(config->config);
  });
}

rs_status rs_run_meanfield(const rs_config* config, rs_result** out) {
  return wrap_result(out, [&] {
    require(config, "config");
    return ringsim::command_meanfield(config->config);
  });
}

rs_status rs_run_toy(const rs_config* config, rs_result** out) {
  return wrap_result(out, [&] {
    require(config, "config");
    return ringsim::command_toy(config->config);
  });
}

rs_status rs_run_recipe(const char* name, int threads, int oracle, rs_result** out) {
  return wrap_result(out, [&] {
    require(name, "name");
    return ringsim::command_reproduce(name, sweep_options(threads, oracle));
  });
}

size_t rs_recipe_count(void) { return ringsim::recipe_names().size(); }

const char* rs_recipe_name(size_t index) {
  const auto& names = ringsim::recipe_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

size_t rs_result_rows(const rs_result* r) { return r ? static_cast<size_t>(r->table.row_count()) : 0; }
size_t rs_result_columns(const rs_result* r) { return r ? static_cast<size_t>(r->table.column_count()) : 0; }

const char* rs_result_column_name(const rs_result* r, size_t column) {
  if (!r || column >= static_cast<size_t>(r->table.column_count())) return nullptr;
  return r->table.columns()[column].c_str();
}

long rs_result_column_index(const rs_result* r, const char* name) {
  if (!r || !name) return -1;
  return r->table.column_index(name);
}

rs_status rs_result_number(const rs_result* r, size_t row, size_t column, double* out) {
  return guard([&] {
    require(r, "result");
    require(out, "out");
    if (row >= rs_result_rows(r) || column >= rs_result_columns(r)) {
      throw ringsim::InvalidArgument("cell index out of range");
    }
    const ringsim::Cell& c = r->table.at(static_cast<int>(row), static_cast<int>(column));
    if (const double* d = std::get_if<double>(&c)) {
      *out = *d;
    } else if (const long long* i = std::get_if<long long>(&c)) {
      *out = static_cast<double>(*i);
    } else {
      throw ringsim::InvalidArgument("cell does not hold a number");
    }
  });
}

const char* rs_result_text(const rs_result* r, size_t row, size_t column) {
  if (!r || row >= rs_result_rows(r) || column >= rs_result_columns(r)) return nullptr;
  const ringsim::Cell& c = r->table.at(static_cast<int>(row), static_cast<int>(column));
  const std::string* s = std::get_if<std::string>(&c);
  return s ? s->c_str() : nullptr;
}

const char* rs_result_sidecar(const rs_result* r) { return r ? r->sidecar.c_str() : nullptr; }

rs_status rs_result_format(const rs_result* r, rs_format format, char** out) {
  return guard([&] {
    require(r, "result");
    require(out, "out");
    *out = dup_string(format == RS_FORMAT_JSON ? ringsim::to_json(r->table) : ringsim::to_csv(r->table));
  });
}

rs_status rs_result_write(const rs_result* r, const char* path, rs_format format) {
  return guard([&] {
    require(r, "result");
    require(path, "path");
    const std::string body = format == RS_FORMAT_JSON ? ringsim::to_json(r->table) : ringsim::to_csv(r->table);
    auto write = [](const std::string& file, const std::string& text) {
      std::ofstream out(file, std::ios::binary | std::ios::trunc);
      out << text;
      out.close();
      if (!out) throw IoError("cannot write " + file);
    };
    write(path, body);
    write(std::string(path) + ".sidecar.json", r->sidecar);
  });
}

void rs_result_free(rs_result* r) { delete r; }

}  // extern "C"
