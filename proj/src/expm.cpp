#include "ptqa/dynamics.hpp"
#include "ptqa/errors.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace ptqa {

namespace {

// b_k = (2m-k)! m! / ((2m)! k! (m-k)!) for m = 6
constexpr std::array<double, 7> kPade6 = {
    1.0, 1.0 / 2.0, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0,
};

// ||A||_1 <= theta keeps the [6/6] truncation error below double rounding.
constexpr double kTheta = 0.5;

double one_norm(const Operator& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

Operator expm(const Operator& a) {
  if (a.rows() != a.cols()) throw DomainError("expm: matrix not square");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;
  if (!a.allFinite()) throw NumericalError("expm: non-finite input");

  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > kTheta) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta)));
  const Operator x = a * std::ldexp(1.0, -squarings);

  const Operator id = Operator::Identity(n, n);
  Operator power = id;
  Operator even = kPade6[0] * id;
  Operator odd = Operator::Zero(n, n);
  for (std::size_t k = 1; k < kPade6.size(); ++k) {
    power = power * x;
    if (k % 2 == 0) {
      even += kPade6[k] * power;
    } else {
      odd += kPade6[k] * power;
    }
  }
  Operator result = (even - odd).partialPivLu().solve(even + odd);
  for (int i = 0; i < squarings; ++i) result = result * result;
  if (!result.allFinite()) throw NumericalError("expm: result overflowed");
  return result;
}

Operator propagator(const Operator& h, double t) {
  const Operator full = expm(-kI * t * h);
  if (t == 0.0) return full;
  const Operator half = expm(-kI * (0.5 * t) * h);
  const double scale = std::max(1.0, one_norm(full));
  const double residual = one_norm(half * half - full) / scale;
  if (residual > kExpmTolerance) {
    std::ostringstream os;
    os << "propagator: exp(-iHt/2)^2 differs from exp(-iHt) by " << residual << " at t=" << t;
    throw NumericalError(os.str());
  }
  return full;
}

}  // namespace ptqa
