// Command-line driver: one subcommand per observable, all backed by run_sweep.
#include "ptqa/errors.hpp"
#include "ptqa/sweep.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace {

using namespace ptqa;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Overrides {
  std::string config;
  std::optional<double> gamma, k, epsilon, g, s0;
  std::vector<double> grid;
  std::string model;
  std::string out;
  std::string format = "csv";
  std::optional<unsigned> jobs;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON job file")->check(CLI::ExistingFile);
  cmd->add_option("--gamma", o.gamma, "gain/loss strength (replaces a gamma axis)");
  cmd->add_option("--k", o.k, "annealing speed (replaces a k axis)");
  cmd->add_option("--epsilon", o.epsilon, "qubit bias (replaces an epsilon axis)");
  cmd->add_option("--g", o.g, "exchange coupling");
  cmd->add_option("--s0", o.s0, "frozen control value: s (full) or s~ (effective)");
  cmd->add_option("--grid", o.grid, "MIN MAX COUNT: s axis for spectra, sample grid otherwise")
      ->expected(3);
  cmd->add_option("--model", o.model, "full|effective");
  cmd->add_option("--out", o.out, "output stem (a .csv suffix is accepted)");
  cmd->add_option("--format", o.format, "csv|csv+svg")->check(CLI::IsMember({"csv", "csv+svg"}));
  cmd->add_option("--jobs", o.jobs, "worker threads (default: all cores)");
}

void drop_axis(SweepJob& job, const std::string& name) {
  std::erase_if(job.axes, [&](const Axis& a) { return a.name == name; });
}

SweepJob default_job(Target target) {
  SweepJob job;
  job.target = target;
  switch (target) {
    case Target::Spectrum:
      job.axes.push_back({"s", 0.0, 1.0, 401, Spacing::Linear});
      break;
    case Target::StaticEvolve:
      job.model = ModelKind::Effective;
      job.grid = SampleGrid{0.0, 200.0, 401};
      break;
    case Target::DrivenEvolve:
      job.model = ModelKind::Effective;
      job.grid = SampleGrid{0.0, 1.0, 201};
      break;
    case Target::Lzs:
      job.model = ModelKind::Effective;
      break;
    case Target::Qaa:
    case Target::EpFind:
      break;
  }
  return job;
}

SweepJob build_job(std::optional<Target> target, const Overrides& o) {
  SweepJob job;
  if (!o.config.empty()) {
    job = load_job(o.config);
    if (target && job.target != *target) {
      throw ConfigError("config target '" + to_string(job.target) + "' does not match subcommand (" +
                        to_string(*target) + ")");
    }
  } else if (target) {
    job = default_job(*target);
  } else {
    throw ConfigError("sweep needs --config");
  }

  if (!o.model.empty()) job.model = parse_model(o.model);
  if (o.gamma) {
    job.fixed.gamma = *o.gamma;
    drop_axis(job, "gamma");
  }
  if (o.k) {
    job.fixed.k = *o.k;
    drop_axis(job, "k");
  }
  if (o.epsilon) {
    job.fixed.epsilon = *o.epsilon;
    drop_axis(job, "epsilon");
  }
  if (o.g) job.fixed.g = *o.g;
  if (o.s0) {
    if (job.model == ModelKind::Effective) {
      job.fixed.s_tilde0 = *o.s0;
      drop_axis(job, "s_tilde0");
    } else {
      job.fixed.s = *o.s0;
      drop_axis(job, "s");
    }
  }
  if (!o.grid.empty()) {
    const double count = o.grid[2];
    if (!(count >= 2.0) || count != std::floor(count)) throw ConfigError("--grid: COUNT must be an integer >= 2");
    const auto n = static_cast<std::size_t>(count);
    if (job.target == Target::Spectrum) {
      drop_axis(job, "s");
      job.axes.insert(job.axes.begin(), Axis{"s", o.grid[0], o.grid[1], n, Spacing::Linear});
    } else {
      job.grid = SampleGrid{o.grid[0], o.grid[1], n};
    }
  }
  if (o.jobs) job.jobs = *o.jobs;
  job.validate();
  return job;
}

// x and y of the heatmap: the two swept axes, or the inner sample grid against one axis.
std::optional<std::pair<std::string, std::string>> heatmap_axes(const SweepJob& job,
                                                                 const ResultTable& table) {
  if (job.axes.size() == 2) {
    if (job.target == Target::Spectrum) {
      const auto& other = job.axes[0].name == "s" ? job.axes[1].name : job.axes[0].name;
      return std::pair{std::string("s"), other};
    }
    if (!job.grid) return std::pair{job.axes[0].name, job.axes[1].name};
  }
  if (job.axes.size() == 1 && job.grid) {
    const std::string inner = table.has_column("t") ? "t" : "s";
    return std::pair{inner, job.axes[0].name};
  }
  return std::nullopt;
}

int run(std::optional<Target> target, const Overrides& o) {
  SweepJob job;
  try {
    job = build_job(target, o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  std::filesystem::path stem = o.out.empty() ? "ptqa_" + to_string(job.target) : o.out;
  if (stem.extension() == ".csv") stem.replace_extension();
  const auto csv = std::filesystem::path(stem.string() + ".csv");

  const ResultTable table = run_sweep(job);
  try {
    emit_csv(table, csv);
    std::cerr << "wrote " << csv.string() << " (" << table.row_count() << " rows, "
              << table.failed_rows() << " failed)\n";
    if (o.format == "csv+svg") {
      const auto axes = heatmap_axes(job, table);
      if (!axes) {
        std::cerr << "config error: a heatmap needs two swept axes or one axis plus a sample grid\n";
        return kExitConfig;
      }
      const auto svg = std::filesystem::path(stem.string() + ".svg");
      emit_heatmap_svg(table, axes->first, axes->second, primary_column(job), svg);
      std::cerr << "wrote " << svg.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (table.failed_rows() > 0) {
    for (std::size_t i = 0; i < table.row_count(); ++i) {
      if (!table.error(i).empty()) {
        std::cerr << "first failure (row " << i << "): " << table.error(i) << "\n";
        break;
      }
    }
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PT-symmetric two-qubit annealing: spectra, dynamics and parameter sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PTQA_VERSION);

  struct Sub {
    const char* name;
    const char* help;
    std::optional<Target> target;
  };
  const Sub subs[] = {
      {"spectrum", "eigenvalues and PT phase along s", Target::Spectrum},
      {"evolve-static", "evolution at frozen s", Target::StaticEvolve},
      {"evolve-driven", "evolution under a linear sweep of s", Target::DrivenEvolve},
      {"anneal", "final ground-state probability of the annealing protocol", Target::Qaa},
      {"lzs", "closed-form tunnelling probability of the effective model", Target::Lzs},
      {"ep", "exceptional points in s", Target::EpFind},
      {"sweep", "run whatever target the config names", std::nullopt},
  };

  std::vector<Overrides> overrides(std::size(subs));
  std::vector<CLI::App*> commands;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    auto* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(cmd, overrides[i]);
    if (!subs[i].target) cmd->get_option("--config")->required();
    commands.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (commands[i]->parsed()) return run(subs[i].target, overrides[i]);
  }
  return kExitConfig;
}
