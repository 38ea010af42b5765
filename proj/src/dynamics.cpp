#include "ptqa/dynamics.hpp"

#include "ptqa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ptqa {

namespace {

constexpr double kZeroNorm = 1e-300;

void check_increasing(std::span<const double> grid, const char* who) {
  if (grid.empty()) throw DomainError(std::string(who) + ": empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw DomainError(std::string(who) + ": grid must be strictly increasing");
    }
  }
}

Sample make_sample(double x, const StateVector& state) {
  return {x, state, state.raw_norm(), populations(state)};
}

// Dormand-Prince 5(4) tableau.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense output (Hairer & Wanner, dopri5 contd5)
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp

// dPsi/dx = factor * (base + param(x) * slope) Psi
class Rhs {
 public:
  Rhs(const AffinePath& path, const Schedule& schedule)
      : base_(path.base), slope_(path.slope), schedule_(schedule) {
    factor_ = schedule.kind == Schedule::Kind::Linear
                  ? -kI / (schedule.k * path.energy_unit)
                  : -kI / path.energy_unit;
    if (schedule.kind == Schedule::Kind::Constant) {
      frozen_ = base_ + schedule.s0 * slope_;
    }
  }

  void operator()(double x, const Amplitudes& y, Amplitudes& out) const {
    if (schedule_.kind == Schedule::Kind::Constant) {
      out.noalias() = frozen_ * y;
    } else {
      out.noalias() = base_ * y;
      out.noalias() += x * (slope_ * y);
    }
    out *= factor_;
  }

 private:
  const Operator& base_;
  const Operator& slope_;
  Schedule schedule_;
  Operator frozen_;
  Complex factor_;
};

double error_norm(const Amplitudes& err, const Amplitudes& y0, const Amplitudes& y1,
                  const OdeOptions& opt) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = opt.atol + opt.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
    sum += std::norm(err(i)) / (sc * sc);
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

}  // namespace

std::vector<double> Trajectory::population_series(std::size_t index) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.populations.at(index));
  return out;
}

std::vector<double> Trajectory::abscissae() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.x);
  return out;
}

std::vector<double> populations(const StateVector& state) {
  const auto& a = state.amplitudes();
  const double total = a.squaredNorm();
  if (!(std::sqrt(total) > kZeroNorm) || !std::isfinite(total)) {
    throw NumericalError("populations: state norm vanished or overflowed");
  }
  std::vector<double> p(static_cast<std::size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(a(i)) / total;
  return p;
}

Trajectory evolve_static(const Operator& h, const StateVector& psi0,
                         std::span<const double> t_grid) {
  check_increasing(t_grid, "evolve_static");
  if (t_grid.front() < 0.0) throw DomainError("evolve_static: times must be >= 0");
  if (h.rows() != psi0.dim()) throw DomainError("evolve_static: dimension mismatch");

  Trajectory traj;
  traj.samples.reserve(t_grid.size());
  StateVector state = psi0;
  double t_prev = 0.0;
  double cached_dt = -1.0;
  Operator step;
  long substeps = 1;
  // keep ||H dt|| per substep small enough that exp(-iH dt) cannot overflow
  const double h_norm = h.cwiseAbs().colwise().sum().maxCoeff();
  for (double t : t_grid) {
    const double dt = t - t_prev;
    if (dt > 0.0) {
      if (std::abs(dt - cached_dt) > 1e-14 * std::max(1.0, dt)) {
        substeps = std::max(1L, static_cast<long>(std::ceil(h_norm * dt / 64.0)));
        step = propagator(h, dt / static_cast<double>(substeps));
        cached_dt = dt;
      }
      for (long i = 0; i < substeps; ++i) {
        state.mutable_amplitudes() = step * state.amplitudes();
        state.rescale_if_needed();
      }
    }
    traj.samples.push_back(make_sample(t, state));
    t_prev = t;
  }
  return traj;
}

AffinePath full_model_path(const ChainParams& params) {
  const Operator h0 = build_hamiltonian(params, 0.0);
  const Operator h1 = build_hamiltonian(params, 1.0);
  return {h0, h1 - h0, params.delta};
}

AffinePath effective_model_path(const EffectiveModel& eff) {
  const Operator h0 = effective_hamiltonian(eff, 0.0);
  const Operator h1 = effective_hamiltonian(eff, 1.0);
  return {h0, h1 - h0, eff.source_params.delta};
}

StateVector effective_initial_state() {
  Amplitudes psi(2);
  psi << 0.0, 1.0;
  return StateVector(std::move(psi));
}

Trajectory evolve_driven(const AffinePath& path, const Schedule& schedule,
                         const StateVector& psi0, std::span<const double> grid,
                         const OdeOptions& options, OdeStats* stats) {
  check_increasing(grid, "evolve_driven");
  if (schedule.kind == Schedule::Kind::Linear && !(schedule.k > 0.0)) {
    throw DomainError("evolve_driven: annealing speed k must be positive");
  }
  if (schedule.kind == Schedule::Kind::Constant && grid.front() < 0.0) {
    throw DomainError("evolve_driven: times must be >= 0");
  }
  if (path.base.rows() != psi0.dim()) throw DomainError("evolve_driven: dimension mismatch");

  using namespace dp;
  const Rhs f(path, schedule);
  const Eigen::Index n = psi0.dim();
  Amplitudes k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y1(n), err(n);

  Trajectory traj;
  traj.samples.reserve(grid.size());
  StateVector state = psi0;
  state.rescale_if_needed();
  traj.samples.push_back(make_sample(grid.front(), state));
  if (grid.size() == 1) return traj;

  double x = grid.front();
  const double x_end = grid.back();
  std::size_t next_sample = 1;
  Amplitudes y = state.amplitudes();
  int exponent = state.scale_exponent();
  f(x, y, k1);

  // initial step from ||y|| / ||f||
  double h = 0.01 * y.norm() / std::max(k1.norm(), 1e-300);
  h = std::clamp(h, 1e-10 * std::max(1.0, x_end - x), x_end - x);

  OdeStats local;
  while (x < x_end) {
    if (local.accepted + local.rejected >= options.max_steps) {
      throw NumericalError("evolve_driven: step budget exhausted");
    }
    const bool last = x + h >= x_end;
    if (last) h = x_end - x;
    const double min_step = 1e-14 * std::max(1.0, std::abs(x));
    if (h < min_step) {
      std::ostringstream os;
      os << "evolve_driven: step size underflow at x=" << x;
      throw NumericalError(os.str());
    }

    tmp = y + h * a21 * k1;
    f(x + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    f(x + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(x + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(x + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const double x_new = last ? x_end : x + h;
    f(x_new, tmp, k6);
    y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(x_new, y1, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double en = error_norm(err, y, y1, options);
    if (!std::isfinite(en)) {
      h *= 0.2;
      ++local.rejected;
      continue;
    }
    if (en <= 1.0) {
      ++local.accepted;
      // samples inside (x, x_new] by the continuous extension
      if (next_sample < grid.size() && grid[next_sample] <= x_new) {
        const Amplitudes diff = y1 - y;
        const Amplitudes bspl = h * k1 - diff;
        const Amplitudes r4 = diff - h * k7 - bspl;
        const Amplitudes r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (next_sample < grid.size() && grid[next_sample] <= x_new) {
          const double xs = grid[next_sample];
          Amplitudes ys;
          if (xs == x_new) {
            ys = y1;
          } else {
            const double th = (xs - x) / h;
            const double th1 = 1.0 - th;
            ys = y + th * (diff + th1 * (bspl + th * (r4 + th1 * r5)));
          }
          traj.samples.push_back(make_sample(xs, StateVector(std::move(ys), exponent)));
          ++next_sample;
        }
      }
      x = x_new;
      y = y1;
      k1 = k7;

      const double norm = y.norm();
      if (norm < 1e-150 || norm > 1e150) {
        int e = 0;
        std::frexp(norm, &e);
        const double factor = std::ldexp(1.0, -e);
        y *= factor;
        k1 *= factor;
        exponent += e;
      }
    } else {
      ++local.rejected;
    }
    const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    if (!last || en > 1.0) h *= fac;
  }
  if (stats != nullptr) *stats = local;
  return traj;
}

double dominant_angular_frequency(std::span<const double> t, std::span<const double> values) {
  const std::size_t n = t.size();
  if (n < 8 || values.size() != n) throw DomainError("dominant_angular_frequency: need >= 8 samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
  const double span = t.back() - t.front();
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);

  std::vector<double> windowed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hann = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n - 1));
    windowed[i] = (values[i] - mean) * hann;
  }
  auto power = [&](double omega) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += windowed[i] * std::polar(1.0, -omega * (t[i] - t.front()));
    return std::norm(acc);
  };

  // coarse scan with 8x zero padding, then golden-section refinement
  const double omega_min = 2.0 * M_PI / span;
  const double omega_max = M_PI / dt;
  const double d_omega = omega_min / 8.0;
  double best_omega = omega_min;
  double best_power = -1.0;
  for (double omega = omega_min; omega <= omega_max; omega += d_omega) {
    const double p = power(omega);
    if (p > best_power) {
      best_power = p;
      best_omega = omega;
    }
  }
  double lo = std::max(0.0, best_omega - d_omega);
  double hi = best_omega + d_omega;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - golden * (hi - lo);
  double b = lo + golden * (hi - lo);
  double pa = power(a), pb = power(b);
  while (hi - lo > 1e-10 * std::max(1.0, best_omega)) {
    if (pa > pb) {
      hi = b;
      b = a;
      pb = pa;
      a = hi - golden * (hi - lo);
      pa = power(a);
    } else {
      lo = a;
      a = b;
      pa = pb;
      b = lo + golden * (hi - lo);
      pb = power(b);
    }
  }
  return 0.5 * (lo + hi);
}

double fit_decay_rate(std::span<const double> t, std::span<const double> values, double asymptote,
                      double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = std::abs(values[i] - asymptote);
    if (d <= lo || d >= hi) continue;
    const double ly = std::log(d);
    sx += t[i];
    sy += ly;
    sxx += t[i] * t[i];
    sxy += t[i] * ly;
    ++count;
  }
  if (count < 3) throw NumericalError("fit_decay_rate: fewer than three samples in the fit window");
  const double c = static_cast<double>(count);
  const double slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  return -slope;
}

}  // namespace ptqa
