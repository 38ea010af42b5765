#pragma once

#include "ptqa/model.hpp"

#include <random>

namespace ptqa::testing {

inline double max_abs(const Operator& a) { return a.cwiseAbs().maxCoeff(); }

/// Random two-qubit parameter sets covering the regimes of interest.
struct ParamGenerator {
  std::mt19937_64 rng{20260101};

  ChainParams next() {
    std::uniform_real_distribution<double> eps(-1.5, 1.5);
    std::uniform_real_distribution<double> gam(0.0, 0.6);
    std::uniform_real_distribution<double> g(0.2, 1.5);
    return ChainParams::two_qubit(eps(rng), gam(rng), g(rng));
  }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
};

}  // namespace ptqa::testing
