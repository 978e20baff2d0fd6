#pragma once

#include "nagumo/energy.hpp"
#include "nagumo/model.hpp"

namespace fixtures {

inline const nagumo::Nonlinearity& cubic() {
  static const nagumo::Nonlinearity f = nagumo::Nonlinearity::cubic(0.6);
  return f;
}

inline const nagumo::ModifiedNonlinearity& modified() {
  static const nagumo::ModifiedNonlinearity f0 = nagumo::build_modified(cubic());
  return f0;
}

// constant weight n = 20, the default instance
inline nagumo::SystemParams constant_params(double n = 20.0) {
  auto w = nagumo::split_weight(nagumo::Weight::constant(1.0, n),
                                nagumo::SplitStrategy::Mean);
  return {0.1, w, modified()};
}

// two-step weight: n1 on ]0, alpha[, n0 on ]alpha, beta[
inline nagumo::SystemParams two_step_params(double n1, double n0, double alpha,
                                            double beta = 1.0) {
  auto w = nagumo::split_weight(
      nagumo::Weight::piecewise_constant(beta, {{alpha, n1}, {beta, n0}}),
      nagumo::SplitStrategy::PlateauValue);
  return {0.1, w, modified()};
}

}  // namespace fixtures
