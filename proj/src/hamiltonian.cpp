#include "nmrqip/hamiltonian.hpp"

namespace nmrqip {

int manifold_component(int state, const std::vector<int>& spins, int n_spins) {
  int twice_m = 0;
  for (int s : spins)
    twice_m += ((state >> (n_spins - 1 - s)) & 1) ? -1 : 1;
  return twice_m;
}

HamiltonianMatrix build_hamiltonian(const SpinSystem& sys) {
  const int n = sys.n_spins;
  const int dim = 1 << n;

  HamiltonianMatrix h;
  h.n_spins = n;
  h.matrix = Eigen::MatrixXcd::Zero(dim, dim);

  for (int b = 0; b < dim; ++b) {
    double diag = 0.0;
    for (int i = 0; i < n; ++i) diag += sys.larmor_hz[i] * spin_m(b, i, n);
    for (const auto& c : sys.couplings) {
      const double mm = spin_m(b, c.i, n) * spin_m(b, c.j, n);
      // homonuclear: D*(3 IzIz - I.I) + J*I.I -> (2D + J) IzIz on the diagonal
      diag += c.heteronuclear ? (c.d_hz + c.j_hz) * mm
                              : (2.0 * c.d_hz + c.j_hz) * mm;
    }
    h.matrix(b, b) = diag;

    // flip-flop terms of full homonuclear couplings: (J - D)/2 between
    // |..ab..> and |..ba..| with a != b
    for (const auto& c : sys.couplings) {
      if (c.heteronuclear) continue;
      const int bi = (b >> (n - 1 - c.i)) & 1;
      const int bj = (b >> (n - 1 - c.j)) & 1;
      if (bi == bj) continue;
      const int b2 = b ^ (1 << (n - 1 - c.i)) ^ (1 << (n - 1 - c.j));
      if (b2 < b) continue;  // fill upper partner once, mirror below
      const double v = 0.5 * (c.j_hz - c.d_hz);
      h.matrix(b, b2) += v;
      h.matrix(b2, b) += v;
    }
  }
  return h;
}

}  // namespace nmrqip
