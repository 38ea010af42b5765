#pragma once

#include "ptqa/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ptqa {

enum class Target { Spectrum, StaticEvolve, DrivenEvolve, Lzs, Qaa, EpFind };
enum class ModelKind { Full, Effective };
enum class Spacing { Linear, Log };

std::string to_string(Target t);
std::string to_string(ModelKind m);
std::string to_string(Spacing s);

/// Values shared by every grid point unless an axis overrides them.
struct FixedParams {
  int n_qubits = 2;
  double delta = 1.0;
  double epsilon = 0.0;
  double gamma = 0.0;
  double g = 1.0;
  double k = 0.01;        ///< annealing speed
  double s = 0.5;         ///< frozen control value, full model
  double s_tilde0 = 0.0;  ///< frozen control value, effective model
  double t_final = 100.0;

  ChainParams chain() const;
};

/// Swept parameter: gamma, k, epsilon, s or s_tilde0.
struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;
  Spacing spacing = Spacing::Linear;

  std::vector<double> values() const;
};

/// Inner sampling: s for spectra and driven trajectories, t for static ones.
struct SampleGrid {
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;

  std::vector<double> values() const;
};

struct SweepJob {
  Target target = Target::Spectrum;
  ModelKind model = ModelKind::Full;
  FixedParams fixed;
  std::vector<Axis> axes;
  std::vector<std::string> outputs;  ///< empty selects every group of the target
  std::optional<SampleGrid> grid;
  unsigned jobs = 0;                 ///< 0: hardware concurrency
  std::string description;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
  /// Output groups this target can produce, in emission order.
  std::vector<std::string> available_outputs() const;
  bool wants(const std::string& output) const;
};

/// Strict parse: unknown keys, wrong types and invalid values raise ConfigError.
SweepJob parse_job(const nlohmann::json& j);
SweepJob load_job(const std::filesystem::path& path);
nlohmann::json to_json(const SweepJob& job);

Target parse_target(const std::string& name);
ModelKind parse_model(const std::string& name);

}  // namespace ptqa
