#include "ptqa/eigensolver.hpp"

#include "ptqa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace ptqa {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxAberthIterations = 2000;
constexpr int kPolishSteps = 3;
// Multiple roots of a floating-point polynomial scatter by ~sqrt(eps); anything
// closer than this (relative to the root scale) is the same root.
constexpr double kClusterRadius = 1e-7;

std::string describe(const Operator& op) {
  std::ostringstream os;
  os.precision(17);
  os << op;
  return os.str();
}

// Value and first derivative by Horner, plus sum |c_k||z|^(n-k) for the
// backward-error stopping test.
struct HornerResult {
  Complex value;
  Complex derivative;
  double magnitude_bound;
};

HornerResult horner(std::span<const Complex> c, Complex z) {
  Complex p = c[0];
  Complex dp = 0.0;
  double bound = std::abs(c[0]);
  const double az = std::abs(z);
  for (std::size_t k = 1; k < c.size(); ++k) {
    dp = dp * z + p;
    p = p * z + c[k];
    bound = bound * az + std::abs(c[k]);
  }
  return {p, dp, bound};
}

// Fujiwara bound on root moduli of a monic polynomial.
double root_bound(std::span<const Complex> c) {
  const std::size_t n = c.size() - 1;
  double bound = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    double term = std::pow(std::abs(c[k]), 1.0 / static_cast<double>(k));
    if (k == n) term = std::pow(std::abs(c[k]) / 2.0, 1.0 / static_cast<double>(k));
    bound = std::max(bound, 2.0 * term);
  }
  return bound;
}

std::vector<Complex> merge_clusters(std::vector<Complex> roots) {
  const std::size_t n = roots.size();
  double scale = 1.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  const double radius = kClusterRadius * scale;

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(roots[i] - roots[j]) < radius) parent[find(j)] = find(i);
    }
  }
  std::vector<Complex> sum(n, 0.0);
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[find(i)] += roots[i];
    ++count[find(i)];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = find(i);
    if (count[r] > 1) roots[i] = sum[r] / static_cast<double>(count[r]);
  }
  return roots;
}

}  // namespace

std::vector<Complex> characteristic_polynomial(const Operator& op) {
  if (op.rows() != op.cols()) throw DomainError("characteristic_polynomial: matrix not square");
  const Eigen::Index n = op.rows();
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  if (n == 0) return c;

  // Work on A / scale so that the power recursion stays O(1).
  double scale = op.cwiseAbs().maxCoeff();
  if (scale == 0.0) return c;
  const Operator a = op / scale;

  Operator m = Operator::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    const Operator am = a * m;
    c[k] = -am.trace() / static_cast<double>(k);
    m = am + c[k] * Operator::Identity(n, n);
  }
  double factor = 1.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    factor *= scale;
    c[k] *= factor;
  }
  return c;
}

Complex evaluate_polynomial(std::span<const Complex> coeffs, Complex z) {
  Complex p = 0.0;
  for (const auto& c : coeffs) p = p * z + c;
  return p;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs) {
  if (coeffs.empty() || coeffs[0] == Complex{0.0}) {
    throw DomainError("polynomial_roots: leading coefficient must be nonzero");
  }
  std::vector<Complex> c(coeffs.begin(), coeffs.end());
  for (auto& x : c) x /= coeffs[0];
  const std::size_t n = c.size() - 1;
  if (n == 0) return {};
  if (n == 1) return {-c[1]};

  // Exact zero roots: deflate so they come back as exact zeros.
  std::size_t zeros = 0;
  while (n - zeros > 0 && c[n - zeros] == Complex{0.0}) ++zeros;
  c.resize(c.size() - zeros);
  const std::size_t m = c.size() - 1;

  std::vector<Complex> z(m);
  if (m == 1) {
    z[0] = -c[1];
  } else if (m > 1) {
    const Complex centre = -c[1] / static_cast<double>(m);
    const double radius = std::max(root_bound(c), 1e-3);
    for (std::size_t j = 0; j < m; ++j) {
      const double angle = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(m) + 0.4;
      z[j] = centre + radius * std::polar(1.0, angle);
    }
    std::vector<bool> done(m, false);
    int iteration = 0;
    for (; iteration < kMaxAberthIterations; ++iteration) {
      bool all_done = true;
      for (std::size_t i = 0; i < m; ++i) {
        if (done[i]) continue;
        const auto h = horner(c, z[i]);
        if (std::abs(h.value) <= 4.0 * kEps * h.magnitude_bound) {
          done[i] = true;
          continue;
        }
        all_done = false;
        const Complex ratio = h.value / h.derivative;
        Complex repulsion = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          if (j != i) repulsion += 1.0 / (z[i] - z[j]);
        }
        const Complex step = ratio / (1.0 - ratio * repulsion);
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
          z[i] += 1e-8 * (1.0 + std::abs(z[i])) * Complex{0.6, 0.8};
          continue;
        }
        z[i] -= step;
        if (std::abs(step) <= kEps * std::abs(z[i])) done[i] = true;
      }
      if (all_done) break;
    }
    if (iteration == kMaxAberthIterations) {
      throw NumericalError("polynomial_roots: Aberth iteration did not converge");
    }
    for (auto& root : z) {
      for (int k = 0; k < kPolishSteps; ++k) {
        const auto h = horner(c, root);
        if (h.derivative == Complex{0.0}) break;
        const Complex candidate = root - h.value / h.derivative;
        if (std::abs(evaluate_polynomial(c, candidate)) < std::abs(h.value)) {
          root = candidate;
        } else {
          break;
        }
      }
    }
  }
  z = merge_clusters(std::move(z));
  z.insert(z.end(), zeros, Complex{0.0});
  return z;
}

std::vector<Complex> eigenvalues(const Operator& op) {
  if (op.rows() != op.cols()) throw DomainError("eigenvalues: matrix not square");
  if (op.rows() > kMaxEigenDim) {
    throw DomainError("eigenvalues: dimension " + std::to_string(op.rows()) + " exceeds " +
                      std::to_string(kMaxEigenDim));
  }
  if (!op.allFinite()) throw DomainError("eigenvalues: matrix has non-finite entries");
  try {
    return polynomial_roots(characteristic_polynomial(op));
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " for matrix\n" + describe(op));
  }
}

Amplitudes eigenvector(const Operator& op, Complex eigenvalue, unsigned seed) {
  const Eigen::Index n = op.rows();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Amplitudes v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex{uni(rng), uni(rng)};
  v.normalize();

  const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
  // No rank-revealing threshold here: a rank-revealing solve would zero out
  // exactly the near-null direction we are after.
  for (double offset = 1e-13; offset < 1e-3; offset *= 1e3) {
    const Complex shift = eigenvalue + offset * scale * Complex{1.0, 0.5};
    const Eigen::PartialPivLU<Operator> lu(op - shift * Operator::Identity(n, n));
    Amplitudes w = v;
    bool finite = true;
    for (int it = 0; it < 4 && finite; ++it) {
      Amplitudes next = lu.solve(w);
      const double norm = next.norm();
      finite = std::isfinite(norm) && norm > 0.0;
      if (finite) w = next / norm;
    }
    if (finite) return w;
  }
  return v;
}

}  // namespace ptqa
