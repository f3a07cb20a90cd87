#pragma once

#include <Eigen/Dense>

#include "nmrqip/eigensystem.hpp"
#include "nmrqip/spin_system.hpp"

namespace nmrqip {

/// Deviation density matrix expressed in the eigenbasis (dimensionless).
/// Immutable by convention: operations return new states.
struct DensityState {
  Eigen::MatrixXcd matrix;
  EigenSystemPtr basis;

  int dim() const { return static_cast<int>(matrix.rows()); }
  double population(int level) const { return matrix(level, level).real(); }
  Eigen::VectorXd populations() const { return matrix.diagonal().real(); }
};

/// High-temperature equilibrium deviation: populations are the diagonal of
/// sum_i gamma_i I_zi in the eigenbasis, no coherences.
DensityState equilibrium_state(const SpinSystem& sys, const EigenSystemPtr& es);

/// Elementwise a - b. Throws on basis mismatch.
DensityState subtract_states(const DensityState& a, const DensityState& b);

}  // namespace nmrqip
