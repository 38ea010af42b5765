#include "ptqa/sweep.hpp"

#include "ptqa/annealing.hpp"
#include "ptqa/dynamics.hpp"
#include "ptqa/effective.hpp"
#include "ptqa/eigensolver.hpp"
#include "ptqa/errors.hpp"
#include "ptqa/lzs.hpp"
#include "ptqa/spectrum.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

namespace ptqa {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kEpSlots = 4;
constexpr std::size_t kEpScanPoints = 801;

// One point of the outer (axes) grid with its parameter values applied.
struct Point {
  std::vector<double> axis_values;
  FixedParams params;
};

struct Row {
  std::vector<double> cells;
  std::string error;
};

// Rows produced by one point.  An inner sample grid yields several.
using Block = std::vector<Row>;

void apply_axis(FixedParams& p, const std::string& name, double value) {
  if (name == "gamma") {
    p.gamma = value;
  } else if (name == "k") {
    p.k = value;
  } else if (name == "epsilon") {
    p.epsilon = value;
  } else if (name == "s") {
    p.s = value;
  } else if (name == "s_tilde0") {
    p.s_tilde0 = value;
  }
}

std::vector<Point> expand_points(const SweepJob& job) {
  std::vector<Point> points{{{}, job.fixed}};
  for (const auto& axis : job.axes) {
    std::vector<Point> next;
    const auto values = axis.values();
    for (const auto& p : points) {
      for (double v : values) {
        Point q = p;
        q.axis_values.push_back(v);
        apply_axis(q.params, axis.name, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

std::size_t level_count(const SweepJob& job) {
  return job.model == ModelKind::Effective ? 2 : hilbert_dim(job.fixed.n_qubits);
}

std::vector<std::string> population_columns(const SweepJob& job) {
  if (job.model == ModelKind::Effective) return {"P_up", "P_down"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < level_count(job); ++i) {
    out.push_back("P_" + basis_label(i, job.fixed.n_qubits));
  }
  return out;
}

void push_complex(std::vector<std::string>& cols, const std::string& base) {
  cols.push_back(re_column(base));
  cols.push_back(im_column(base));
}

// Everything after the axis columns.
std::vector<std::string> result_columns(const SweepJob& job) {
  std::vector<std::string> cols;
  const std::size_t n = level_count(job);
  switch (job.target) {
    case Target::Spectrum:
      if (job.model == ModelKind::Effective) cols.push_back("s_tilde");
      if (job.wants("eigenvalues")) {
        for (std::size_t i = 0; i < n; ++i) push_complex(cols, "E" + std::to_string(i));
      }
      if (job.wants("phase")) cols.push_back("broken_pairs");
      if (job.wants("gap")) {
        cols.push_back("omega");
        cols.push_back("decay");
      }
      break;
    case Target::EpFind:
      cols.push_back("ep_count");
      for (std::size_t i = 0; i < kEpSlots; ++i) {
        const auto tag = std::to_string(i);
        cols.push_back("s_ep" + tag);
        push_complex(cols, "E_ep" + tag);
        cols.push_back("branch_a" + tag);
        cols.push_back("branch_b" + tag);
      }
      break;
    case Target::StaticEvolve:
    case Target::DrivenEvolve:
      cols.push_back(job.target == Target::StaticEvolve ? "t" : "s");
      if (job.target == Target::DrivenEvolve && job.model == ModelKind::Effective) {
        cols.push_back("s_tilde");
      }
      if (job.wants("populations")) {
        for (const auto& c : population_columns(job)) cols.push_back(c);
      }
      if (job.wants("norm")) cols.push_back("log_norm");
      break;
    case Target::Lzs:
      if (job.wants("probability")) {
        cols.push_back("P_lzs");
        cols.push_back("exponent");
      }
      if (job.wants("validity")) {
        cols.push_back("validity");
        cols.push_back("trusted");
      }
      break;
    case Target::Qaa:
      if (job.wants("p_ground")) {
        cols.push_back("P_gr");
        cols.push_back("near_degenerate");
      }
      if (job.wants("coefficients")) {
        for (std::size_t i = 0; i < n; ++i) push_complex(cols, "a" + std::to_string(i));
      }
      if (job.wants("norm")) cols.push_back("log_norm");
      break;
  }
  return cols;
}

ChainParams chain_of(const FixedParams& f) {
  ChainParams p = f.chain();
  p.validate();
  return p;
}

// Spectrum rows carry raw eigenvalues here; ordering and phases are a post-pass.
Block spectrum_block(const SweepJob& job, const Point& pt, const std::vector<double>& head) {
  const ChainParams p = chain_of(pt.params);
  Row row;
  row.cells = head;
  if (job.model == ModelKind::Effective) {
    const auto eff = effective_params(p);
    const double st = pt.params.s - eff.s_cr;
    row.cells.push_back(st);
    const auto e = effective_eigenvalues(eff, st);
    for (auto z : e) {
      row.cells.push_back(z.real());
      row.cells.push_back(z.imag());
    }
  } else {
    for (auto z : eigenvalues(build_hamiltonian(p, pt.params.s))) {
      row.cells.push_back(z.real());
      row.cells.push_back(z.imag());
    }
  }
  return {row};
}

Block ep_block(const SweepJob& job, const Point& pt, const std::vector<double>& head) {
  const ChainParams p = chain_of(pt.params);
  std::vector<ExceptionalPoint> eps;
  if (job.model == ModelKind::Effective) {
    const auto eff = effective_params(p);
    if (eff.ell > 0.0) {
      const double off = effective_ep_offset(eff);
      for (double st : {-off, off}) {
        const double s = eff.s_cr + st;
        if (s < 0.0 || s > 1.0) continue;
        const Complex e = eff.e_cr - 0.5 * (eff.g + eff.w) * st;
        eps.push_back({s, e, {0, 1}});
      }
    }
  } else {
    const double lo = job.grid ? job.grid->min : 0.0;
    const double hi = job.grid ? job.grid->max : 1.0;
    const std::size_t n = job.grid ? job.grid->count : kEpScanPoints;
    eps = find_exceptional_points(p, lo, hi, n);
  }
  Row row;
  row.cells = head;
  row.cells.push_back(static_cast<double>(eps.size()));
  for (std::size_t i = 0; i < kEpSlots; ++i) {
    if (i < eps.size()) {
      row.cells.insert(row.cells.end(), {eps[i].s_ep, eps[i].energy.real(), eps[i].energy.imag(),
                                         static_cast<double>(eps[i].branch_pair.first),
                                         static_cast<double>(eps[i].branch_pair.second)});
    } else {
      row.cells.insert(row.cells.end(), 5, kNan);
    }
  }
  if (eps.size() > kEpSlots) {
    row.error = "found " + std::to_string(eps.size()) + " exceptional points, only " +
                std::to_string(kEpSlots) + " reported";
  }
  return {row};
}

void append_state(const SweepJob& job, const Sample& smp, std::vector<double>& cells) {
  if (job.wants("populations")) {
    for (double p : smp.populations) cells.push_back(p);
  }
  if (job.wants("norm")) cells.push_back(smp.state.log_raw_norm());
}

Block static_block(const SweepJob& job, const Point& pt, const std::vector<double>& head) {
  const ChainParams p = chain_of(pt.params);
  Operator h;
  StateVector psi0;
  if (job.model == ModelKind::Effective) {
    const auto eff = effective_params(p);
    h = effective_hamiltonian(eff, pt.params.s_tilde0);
    psi0 = effective_initial_state();
  } else {
    h = build_hamiltonian(p, pt.params.s);
    psi0 = initial_ground_state(p);
  }
  h /= p.delta;
  const std::vector<double> times =
      job.grid ? job.grid->values() : std::vector<double>{pt.params.t_final};
  const auto traj = evolve_static(h, psi0, times);
  Block block;
  for (const auto& smp : traj.samples) {
    Row row;
    row.cells = head;
    row.cells.push_back(smp.x);
    append_state(job, smp, row.cells);
    block.push_back(std::move(row));
  }
  return block;
}

Block driven_block(const SweepJob& job, const Point& pt, const std::vector<double>& head) {
  const ChainParams p = chain_of(pt.params);
  std::vector<double> s_grid = job.grid ? job.grid->values() : std::vector<double>{1.0};
  const bool prepend = s_grid.front() > 0.0;
  if (prepend) s_grid.insert(s_grid.begin(), 0.0);

  Trajectory traj;
  double s_cr = 0.0;
  if (job.model == ModelKind::Effective) {
    const auto eff = effective_params(p);
    s_cr = eff.s_cr;
    std::vector<double> x(s_grid.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = s_grid[i] - s_cr;
    traj = evolve_driven(effective_model_path(eff), Schedule::linear(pt.params.k),
                         effective_initial_state(), x);
  } else {
    traj = evolve_driven(full_model_path(p), Schedule::linear(pt.params.k), initial_ground_state(p),
                         s_grid);
  }
  Block block;
  for (std::size_t i = prepend ? 1 : 0; i < traj.samples.size(); ++i) {
    Row row;
    row.cells = head;
    row.cells.push_back(s_grid[i]);
    if (job.model == ModelKind::Effective) row.cells.push_back(s_grid[i] - s_cr);
    append_state(job, traj.samples[i], row.cells);
    block.push_back(std::move(row));
  }
  return block;
}

Block lzs_block(const SweepJob& job, const Point& pt, const std::vector<double>& head) {
  const auto eff = effective_params(chain_of(pt.params));
  const auto r = lzs_probability(eff, pt.params.k);
  Row row;
  row.cells = head;
  if (job.wants("probability")) row.cells.insert(row.cells.end(), {r.p_ground, r.exponent});
  if (job.wants("validity")) row.cells.insert(row.cells.end(), {r.validity, r.trusted() ? 1.0 : 0.0});
  return {row};
}

Block qaa_block(const SweepJob& job, const Point& pt, const std::vector<double>& head) {
  const ChainParams p = chain_of(pt.params);
  std::vector<Complex> coeffs;
  double p_ground = 0.0;
  double log_norm = 0.0;
  bool near_degenerate = false;
  if (job.model == ModelKind::Effective) {
    const auto eff = effective_params(p);
    const std::vector<double> x{eff.s_tilde_begin(), eff.s_tilde_end()};
    const auto traj = evolve_driven(effective_model_path(eff), Schedule::linear(pt.params.k),
                                    effective_initial_state(), x);
    const auto& st = traj.final().state;
    const Amplitudes a = st.amplitudes() / st.amplitudes().norm();
    coeffs.assign(a.data(), a.data() + a.size());
    p_ground = traj.final().populations[0];
    log_norm = st.log_raw_norm();
  } else {
    const auto r = run_qaa(p, pt.params.k);
    double total = 0.0;
    for (auto c : r.coefficients) total += std::norm(c);
    const double norm = std::sqrt(total);
    for (auto c : r.coefficients) coeffs.push_back(c / norm);
    p_ground = r.p_ground;
    log_norm = r.final_state.log_raw_norm();
    near_degenerate = r.near_degenerate;
  }
  Row row;
  row.cells = head;
  if (job.wants("p_ground")) row.cells.insert(row.cells.end(), {p_ground, near_degenerate ? 1.0 : 0.0});
  if (job.wants("coefficients")) {
    for (auto c : coeffs) row.cells.insert(row.cells.end(), {c.real(), c.imag()});
  }
  if (job.wants("norm")) row.cells.push_back(log_norm);
  return {row};
}

// Rows a failed point still has to contribute, so the table stays complete.
std::size_t rows_per_point(const SweepJob& job) {
  if (job.target == Target::StaticEvolve || job.target == Target::DrivenEvolve) {
    return job.grid ? job.grid->count : 1;
  }
  return 1;
}

Block failed_block(const SweepJob& job, const std::vector<double>& head, std::size_t width,
                   const std::string& message) {
  Block block;
  const std::vector<double> inner = job.grid ? job.grid->values() : std::vector<double>{};
  for (std::size_t i = 0; i < rows_per_point(job); ++i) {
    Row row;
    row.cells = head;
    // keep the sample coordinate so the grid stays identifiable
    if (job.target == Target::StaticEvolve) {
      row.cells.push_back(job.grid ? inner[i] : job.fixed.t_final);
    } else if (job.target == Target::DrivenEvolve) {
      row.cells.push_back(job.grid ? inner[i] : 1.0);
    }
    row.cells.resize(width, kNan);
    row.error = message;
    block.push_back(std::move(row));
  }
  return block;
}

Block evaluate(const SweepJob& job, const Point& pt, std::size_t width) {
  const std::vector<double>& head = pt.axis_values;
  try {
    Block b;
    switch (job.target) {
      case Target::Spectrum: b = spectrum_block(job, pt, head); break;
      case Target::EpFind: b = ep_block(job, pt, head); break;
      case Target::StaticEvolve: b = static_block(job, pt, head); break;
      case Target::DrivenEvolve: b = driven_block(job, pt, head); break;
      case Target::Lzs: b = lzs_block(job, pt, head); break;
      case Target::Qaa: b = qaa_block(job, pt, head); break;
    }
    for (auto& row : b) {
      if (row.cells.size() != width) throw std::logic_error("sweep: row width mismatch");
    }
    return b;
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const DomainError*>(&e) == nullptr) throw;
    return failed_block(job, head, width, e.what());
  } catch (const std::runtime_error& e) {
    return failed_block(job, head, width, e.what());
  }
}

// Continuity ordering of spectrum rows along s, separately for each value of
// the remaining axis; phases are classified afterwards.
void order_spectrum(const SweepJob& job, std::vector<Block>& blocks) {
  std::size_t s_axis = 0;
  for (std::size_t i = 0; i < job.axes.size(); ++i) {
    if (job.axes[i].name == "s") s_axis = i;
  }
  const std::size_t n = level_count(job);
  const std::size_t e_first = job.axes.size() + (job.model == ModelKind::Effective ? 1 : 0);

  std::map<std::vector<double>, std::vector<std::size_t>> groups;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    auto key = blocks[b][0].cells;
    key.resize(job.axes.size());
    key.erase(key.begin() + static_cast<long>(s_axis));
    groups[key].push_back(b);
  }

  for (auto& [_, members] : groups) {
    std::vector<SpectrumPoint> pts;
    std::vector<std::size_t> ok;
    for (std::size_t b : members) {
      const Row& r = blocks[b][0];
      if (!r.error.empty()) continue;
      SpectrumPoint sp;
      sp.s = r.cells[s_axis];
      for (std::size_t i = 0; i < n; ++i) sp.eigenvalues.emplace_back(r.cells[e_first + 2 * i], r.cells[e_first + 2 * i + 1]);
      pts.push_back(std::move(sp));
      ok.push_back(b);
    }
    double failed_from = std::numeric_limits<double>::infinity();
    std::string failure;
    try {
      order_branches(pts);
    } catch (const AmbiguousMatchError& e) {
      failed_from = e.location();
      failure = e.what();
    }
    for (std::size_t m = 0; m < ok.size(); ++m) {
      Row& r = blocks[ok[m]][0];
      if (pts[m].s >= failed_from) r.error = failure;
      std::vector<double> tail(r.cells.begin() + static_cast<long>(e_first + 2 * n), r.cells.end());
      r.cells.resize(e_first);
      if (job.wants("eigenvalues")) {
        for (auto z : pts[m].eigenvalues) r.cells.insert(r.cells.end(), {z.real(), z.imag()});
      }
      if (job.wants("phase")) {
        try {
          r.cells.push_back(classify_phase(pts[m].eigenvalues, phase_tolerance(pts[m].eigenvalues)).broken_pairs);
        } catch (const NumericalError& e) {
          r.cells.push_back(kNan);
          if (r.error.empty()) r.error = e.what();
        }
      }
      if (job.wants("gap")) {
        const auto& e = pts[m].eigenvalues;
        r.cells.push_back(std::abs((e[0] - e[1]).real()));
        r.cells.push_back(std::abs((e[0] - e[1]).imag()));
      }
    }
  }
}

nlohmann::json make_metadata(const SweepJob& job, const ResultTable& table) {
  nlohmann::json meta;
  meta["job"] = to_json(job);
  meta["version"] = PTQA_VERSION;
  meta["units"] = "energies in units of delta, time in hbar/delta";
  if (job.model == ModelKind::Effective) meta["energy_origin"] = "crossing energy E_cr";
  const OdeOptions ode;
  meta["tolerances"] = {{"ode_rtol", ode.rtol},
                        {"ode_atol", ode.atol},
                        {"expm_rel", kExpmTolerance},
                        {"phase_rel", 1e-9},
                        {"ep_bracket", kEpBracket},
                        {"ep_overlap", kEpOverlap},
                        {"lzs_validity_threshold", kLzsValidityThreshold},
                        {"near_degenerate_gap", kNearDegenerateGap}};
  nlohmann::json flags;
  if (table.has_column("trusted")) {
    std::size_t n = 0;
    for (double v : table.column("trusted")) n += v == 0.0 ? 1 : 0;
    flags["lzs_untrusted_rows"] = n;
  }
  if (table.has_column("near_degenerate")) {
    std::size_t n = 0;
    for (double v : table.column("near_degenerate")) n += v == 1.0 ? 1 : 0;
    flags["near_degenerate_rows"] = n;
  }
  meta["flags"] = flags.is_null() ? nlohmann::json::object() : flags;
  if (job.target == Target::Qaa && job.wants("coefficients")) {
    meta["coefficients"] = "normalised by the raw norm; log_norm carries the magnitude";
  }
  return meta;
}

}  // namespace

std::string basis_label(std::size_t index, int n_qubits) {
  std::string s;
  for (int q = n_qubits - 1; q >= 0; --q) s += ((index >> q) & 1U) ? 'd' : 'u';
  return s;
}

std::string primary_column(const SweepJob& job) {
  switch (job.target) {
    case Target::Spectrum:
      return job.wants("phase") ? "broken_pairs" : "E0_re";
    case Target::EpFind:
      return "ep_count";
    case Target::StaticEvolve:
    case Target::DrivenEvolve:
      return job.model == ModelKind::Effective ? "P_up" : "P_" + basis_label(0, job.fixed.n_qubits);
    case Target::Lzs:
      return job.wants("probability") ? "P_lzs" : "validity";
    case Target::Qaa:
      return job.wants("p_ground") ? "P_gr" : "log_norm";
  }
  return {};
}

ResultTable run_sweep(const SweepJob& job, std::optional<unsigned> workers) {
  job.validate();
  std::vector<std::string> columns;
  for (const auto& a : job.axes) columns.push_back(a.name);
  for (auto& c : result_columns(job)) columns.push_back(std::move(c));
  const std::size_t width = columns.size();

  const auto points = expand_points(job);
  std::vector<Block> blocks(points.size());
  // Spectrum rows hold raw eigenvalues until the ordering pass.
  const std::size_t eval_width =
      job.target == Target::Spectrum
          ? job.axes.size() + (job.model == ModelKind::Effective ? 1 : 0) + 2 * level_count(job)
          : width;

  unsigned n_workers = workers.value_or(job.jobs);
  if (n_workers == 0) n_workers = std::max(1U, std::thread::hardware_concurrency());
  n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, points.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        blocks[i] = evaluate(job, points[i], eval_width);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work);
  }
  if (fatal) std::rethrow_exception(fatal);

  if (job.target == Target::Spectrum) {
    order_spectrum(job, blocks);
    for (auto& b : blocks) {
      for (auto& r : b) r.cells.resize(width, kNan);
    }
  }

  ResultTable table(columns);
  for (auto& b : blocks) {
    for (auto& r : b) table.add_row(std::move(r.cells), std::move(r.error));
  }
  table.metadata = make_metadata(job, table);
  return table;
}

}  // namespace ptqa
