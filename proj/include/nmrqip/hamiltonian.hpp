#pragma once

#include <Eigen/Dense>

#include "nmrqip/spin_system.hpp"

namespace nmrqip {

/// Spin Hamiltonian in the product (Zeeman) basis, units of Hz.
/// Spin 0 is most significant; bit 0 of a basis index is |alpha> for the
/// last spin. Homonuclear pairs carry D*(3IzIz - I.I) + J*I.I, heteronuclear
/// pairs the truncated (D + J)*Iz*Sz form.
struct HamiltonianMatrix {
  int n_spins = 0;
  Eigen::MatrixXcd matrix;

  int dim() const { return 1 << n_spins; }
};

HamiltonianMatrix build_hamiltonian(const SpinSystem& sys);

/// m = +1/2 (alpha) or -1/2 (beta) of spin `spin` in product state `state`.
inline double spin_m(int state, int spin, int n_spins) {
  return ((state >> (n_spins - 1 - spin)) & 1) ? -0.5 : 0.5;
}

/// Twice the total magnetic quantum number of one species, per product state.
int manifold_component(int state, const std::vector<int>& spins, int n_spins);

}  // namespace nmrqip
