#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "nmrqip/hamiltonian.hpp"
#include "nmrqip/spin_system.hpp"

namespace nmrqip {

/// One manifold of the Hamiltonian: the set of product states (and resulting
/// levels) sharing a per-species total magnetic quantum number vector.
struct ManifoldBlock {
  std::vector<int> key;           // twice the total M per species, manifold order
  std::vector<int> basis_states;  // product-basis indices, ascending
  int level_begin = 0;            // first level index of this block
  int size() const { return static_cast<int>(basis_states.size()); }
};

/// Eigenvalues (Hz) and eigenvectors of the spin Hamiltonian.
///
/// Levels are sorted by descending manifold key (lexicographic over the
/// manifold species order, heteronucleus first), then by descending energy
/// within each manifold. Near-degenerate levels (within 1e-9 Hz) are ordered
/// by descending overlap with the manifold's smallest product state.
struct EigenSystem {
  int n_spins = 0;
  std::vector<std::string> manifold_species;  // canonical species order
  Eigen::VectorXd energies;                   // per level, Hz
  Eigen::MatrixXcd vectors;                   // columns = levels, product basis
  std::vector<std::vector<int>> manifold;     // per level: twice M per species
  std::vector<ManifoldBlock> blocks;
  std::vector<int> block_of_level;

  int dim() const { return 1 << n_spins; }

  bool same_manifold(int u, int v) const { return manifold[u] == manifold[v]; }
};

/// Block-wise Hermitian eigendecomposition. Throws on solver failure.
EigenSystem diagonalize(const HamiltonianMatrix& h, const SpinSystem& sys,
                        Exec exec = Exec::parallel);

using EigenSystemPtr = std::shared_ptr<const EigenSystem>;

}  // namespace nmrqip
