#include "ptqa/sweep_config.hpp"

#include "ptqa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace ptqa {

using nlohmann::json;

namespace {

struct TargetName {
  Target target;
  const char* name;
};

constexpr TargetName kTargets[] = {
    {Target::Spectrum, "spectrum"}, {Target::StaticEvolve, "static_evolve"},
    {Target::DrivenEvolve, "driven_evolve"}, {Target::Lzs, "lzs"},
    {Target::Qaa, "qaa"}, {Target::EpFind, "ep_find"},
};

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

double get_real(const json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": must be finite");
  return x;
}

std::size_t get_count(const json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + "." + key + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string get_string(const json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

void read_real(const json& j, const char* key, double& out, const std::string& where) {
  if (j.contains(key)) out = get_real(j, key, where);
}

bool relevant_axis(Target target, ModelKind model, const std::string& name) {
  switch (target) {
    case Target::Spectrum:
      return name == "s" || name == "gamma" || name == "epsilon";
    case Target::EpFind:
      return name == "gamma" || name == "epsilon";
    case Target::StaticEvolve:
      return name == "gamma" || name == "epsilon" ||
             name == (model == ModelKind::Full ? "s" : "s_tilde0");
    case Target::DrivenEvolve:
    case Target::Lzs:
    case Target::Qaa:
      return name == "gamma" || name == "epsilon" || name == "k";
  }
  return false;
}

}  // namespace

std::string to_string(Target t) {
  for (const auto& [target, name] : kTargets) {
    if (target == t) return name;
  }
  return "unknown";
}

std::string to_string(ModelKind m) { return m == ModelKind::Full ? "full" : "effective"; }
std::string to_string(Spacing s) { return s == Spacing::Linear ? "linear" : "log"; }

Target parse_target(const std::string& name) {
  for (const auto& [target, n] : kTargets) {
    if (name == n) return target;
  }
  throw ConfigError("unknown target '" + name + "'");
}

ModelKind parse_model(const std::string& name) {
  if (name == "full") return ModelKind::Full;
  if (name == "effective") return ModelKind::Effective;
  throw ConfigError("unknown model '" + name + "' (full|effective)");
}

ChainParams FixedParams::chain() const {
  ChainParams p = ChainParams::two_qubit(epsilon, gamma, g, delta);
  p.n_qubits = n_qubits;
  return p;
}

std::vector<double> Axis::values() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
    out[i] = spacing == Spacing::Linear ? min + (max - min) * f
                                        : std::exp(std::log(min) + (std::log(max) - std::log(min)) * f);
  }
  if (count > 1) {
    out.front() = min;
    out.back() = max;
  }
  return out;
}

std::vector<double> SampleGrid::values() const {
  Axis a{"grid", min, max, count, Spacing::Linear};
  return a.values();
}

std::vector<std::string> SweepJob::available_outputs() const {
  switch (target) {
    case Target::Spectrum:
      if (model == ModelKind::Effective) return {"eigenvalues", "phase", "gap"};
      return {"eigenvalues", "phase"};
    case Target::EpFind:
      return {"eps"};
    case Target::StaticEvolve:
    case Target::DrivenEvolve:
      return {"populations", "norm"};
    case Target::Lzs:
      return {"probability", "validity"};
    case Target::Qaa:
      return {"p_ground", "coefficients", "norm"};
  }
  return {};
}

bool SweepJob::wants(const std::string& output) const {
  if (outputs.empty()) {
    const auto all = available_outputs();
    return std::find(all.begin(), all.end(), output) != all.end();
  }
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

void SweepJob::validate() const {
  if (axes.size() > 2) throw ConfigError("at most two axes may be swept");
  std::set<std::string> seen;
  for (const auto& a : axes) {
    const std::string where = "axis '" + a.name + "'";
    if (!relevant_axis(target, model, a.name)) {
      throw ConfigError(where + " is not a parameter of target " + to_string(target) + " (" +
                        to_string(model) + " model)");
    }
    if (!seen.insert(a.name).second) throw ConfigError(where + " appears twice");
    if (a.count < 2) throw ConfigError(where + ": count must be >= 2");
    if (!(a.min < a.max)) throw ConfigError(where + ": min must be < max");
    if (a.spacing == Spacing::Log && !(a.min > 0.0)) {
      throw ConfigError(where + ": log spacing requires min > 0");
    }
  }
  if (target == Target::Spectrum && !seen.count("s")) {
    throw ConfigError("spectrum target needs an 's' axis");
  }
  if (grid) {
    if (target == Target::Spectrum || target == Target::Lzs || target == Target::Qaa) {
      throw ConfigError("'grid' is not used by target " + to_string(target));
    }
    if (grid->count < 2) throw ConfigError("grid: count must be >= 2");
    if (!(grid->min < grid->max)) throw ConfigError("grid: min must be < max");
    if (target == Target::StaticEvolve && grid->min < 0.0) {
      throw ConfigError("grid: times must be >= 0");
    }
    if ((target == Target::DrivenEvolve || target == Target::EpFind) &&
        (grid->min < 0.0 || grid->max > 1.0)) {
      throw ConfigError("grid: s must lie in [0, 1]");
    }
  }
  const auto all = available_outputs();
  for (const auto& o : outputs) {
    if (std::find(all.begin(), all.end(), o) == all.end()) {
      throw ConfigError("output '" + o + "' is not produced by target " + to_string(target));
    }
  }
  if (model == ModelKind::Effective && fixed.n_qubits != 2) {
    throw ConfigError("the effective model needs n_qubits = 2");
  }
  if (target == Target::Lzs && model != ModelKind::Effective) {
    throw ConfigError("lzs is defined for the effective model only");
  }
  if (fixed.n_qubits < 1 || fixed.n_qubits > 12) throw ConfigError("fixed.n_qubits must be in [1, 12]");
  if (!(fixed.delta > 0.0)) throw ConfigError("fixed.delta must be > 0");
  if (fixed.gamma < 0.0) throw ConfigError("fixed.gamma must be >= 0");
  if (!(fixed.k > 0.0)) throw ConfigError("fixed.k must be > 0");
  if (!(fixed.t_final > 0.0)) throw ConfigError("fixed.t_final must be > 0");
  for (const auto& a : axes) {
    if (a.name == "gamma" && a.min < 0.0) throw ConfigError("axis 'gamma': must be >= 0");
    if (a.name == "k" && !(a.min > 0.0)) throw ConfigError("axis 'k': must be > 0");
  }
}

SweepJob parse_job(const json& j) {
  reject_unknown(j, {"target", "model", "fixed", "axes", "outputs", "grid", "jobs", "description"},
                 "config");
  SweepJob job;
  try {
    if (!j.contains("target")) throw ConfigError("config: 'target' is required");
    job.target = parse_target(get_string(j, "target", "config"));
    if (j.contains("model")) job.model = parse_model(get_string(j, "model", "config"));
    if (job.target == Target::Lzs && !j.contains("model")) job.model = ModelKind::Effective;
    if (j.contains("description")) job.description = get_string(j, "description", "config");

    if (j.contains("fixed")) {
      const auto& f = j.at("fixed");
      reject_unknown(f, {"n_qubits", "delta", "epsilon", "gamma", "g", "k", "s", "s_tilde0", "t_final"},
                     "fixed");
      if (f.contains("n_qubits")) {
        job.fixed.n_qubits = static_cast<int>(get_count(f, "n_qubits", "fixed"));
      }
      read_real(f, "delta", job.fixed.delta, "fixed");
      read_real(f, "epsilon", job.fixed.epsilon, "fixed");
      read_real(f, "gamma", job.fixed.gamma, "fixed");
      read_real(f, "g", job.fixed.g, "fixed");
      read_real(f, "k", job.fixed.k, "fixed");
      read_real(f, "s", job.fixed.s, "fixed");
      read_real(f, "s_tilde0", job.fixed.s_tilde0, "fixed");
      read_real(f, "t_final", job.fixed.t_final, "fixed");
    }

    if (j.contains("axes")) {
      if (!j.at("axes").is_array()) throw ConfigError("axes: expected an array");
      for (const auto& a : j.at("axes")) {
        reject_unknown(a, {"name", "min", "max", "count", "spacing"}, "axes[]");
        Axis axis;
        axis.name = get_string(a, "name", "axes[]");
        const std::string where = "axes[" + axis.name + "]";
        axis.min = get_real(a, "min", where);
        axis.max = get_real(a, "max", where);
        axis.count = get_count(a, "count", where);
        if (a.contains("spacing")) {
          const auto sp = get_string(a, "spacing", where);
          if (sp == "linear") {
            axis.spacing = Spacing::Linear;
          } else if (sp == "log") {
            axis.spacing = Spacing::Log;
          } else {
            throw ConfigError(where + ".spacing: expected linear|log");
          }
        }
        job.axes.push_back(axis);
      }
    }

    if (j.contains("outputs")) {
      if (!j.at("outputs").is_array()) throw ConfigError("outputs: expected an array");
      for (const auto& o : j.at("outputs")) {
        if (!o.is_string()) throw ConfigError("outputs: expected strings");
        job.outputs.push_back(o.get<std::string>());
      }
    }

    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      reject_unknown(g, {"min", "max", "count"}, "grid");
      SampleGrid grid;
      grid.min = get_real(g, "min", "grid");
      grid.max = get_real(g, "max", "grid");
      grid.count = get_count(g, "count", "grid");
      job.grid = grid;
    }

    if (j.contains("jobs")) job.jobs = static_cast<unsigned>(get_count(j, "jobs", "config"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  job.validate();
  return job;
}

SweepJob load_job(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_job(j);
}

json to_json(const SweepJob& job) {
  json j;
  j["target"] = to_string(job.target);
  j["model"] = to_string(job.model);
  if (!job.description.empty()) j["description"] = job.description;
  const auto& f = job.fixed;
  j["fixed"] = {{"n_qubits", f.n_qubits}, {"delta", f.delta}, {"epsilon", f.epsilon},
                {"gamma", f.gamma},       {"g", f.g},         {"k", f.k},
                {"s", f.s},               {"s_tilde0", f.s_tilde0}, {"t_final", f.t_final}};
  j["axes"] = json::array();
  for (const auto& a : job.axes) {
    j["axes"].push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count},
                         {"spacing", to_string(a.spacing)}});
  }
  j["outputs"] = job.outputs;
  if (job.grid) j["grid"] = {{"min", job.grid->min}, {"max", job.grid->max}, {"count", job.grid->count}};
  // worker count is an execution setting; leaving it out keeps the echo identical across runs
  return j;
}

}  // namespace ptqa
