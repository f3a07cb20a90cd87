#include "nmrqip/eigensystem.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nmrqip {

namespace {

constexpr double kDegeneracyTol = 1e-9;  // Hz

struct BlockResult {
  Eigen::VectorXd energies;   // descending
  Eigen::MatrixXcd vectors;   // columns, in block-local basis
};

// Diagonalize one manifold block and order its levels: descending energy,
// degenerate clusters by descending overlap with the block's first basis state
// (falling through the remaining components on exact ties).
BlockResult solve_block(const Eigen::MatrixXcd& sub) {
  const int m = static_cast<int>(sub.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("Hermitian eigensolver failed to converge");

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  const auto& vals = solver.eigenvalues();
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return vals(a) > vals(b); });

  auto overlap_less = [&](int a, int b) {
    for (int c = 0; c < m; ++c) {
      const double oa = std::norm(solver.eigenvectors()(c, a));
      const double ob = std::norm(solver.eigenvectors()(c, b));
      if (std::abs(oa - ob) > 1e-12) return oa > ob;
    }
    return false;
  };
  for (int i = 0; i < m;) {
    int j = i + 1;
    while (j < m && vals(order[j - 1]) - vals(order[j]) <= kDegeneracyTol) ++j;
    if (j - i > 1) std::sort(order.begin() + i, order.begin() + j, overlap_less);
    i = j;
  }

  BlockResult out;
  out.energies.resize(m);
  out.vectors.resize(m, m);
  for (int k = 0; k < m; ++k) {
    out.energies(k) = vals(order[k]);
    out.vectors.col(k) = solver.eigenvectors().col(order[k]);
  }
  return out;
}

}  // namespace

EigenSystem diagonalize(const HamiltonianMatrix& h, const SpinSystem& sys,
                        Exec exec) {
  const int n = h.n_spins;
  const int dim = 1 << n;

  EigenSystem es;
  es.n_spins = n;
  es.manifold_species = sys.manifold_species_order();

  std::vector<std::vector<int>> species_spins;
  for (const auto& tag : es.manifold_species)
    species_spins.push_back(sys.spins_of(tag));

  // Group product states by manifold key, descending lexicographic.
  std::map<std::vector<int>, std::vector<int>, std::greater<>> groups;
  for (int b = 0; b < dim; ++b) {
    std::vector<int> key;
    key.reserve(species_spins.size());
    for (const auto& spins : species_spins)
      key.push_back(manifold_component(b, spins, n));
    groups[key].push_back(b);
  }

  int level = 0;
  for (auto& [key, states] : groups) {
    ManifoldBlock blk;
    blk.key = key;
    blk.basis_states = states;
    blk.level_begin = level;
    level += blk.size();
    es.blocks.push_back(std::move(blk));
  }

  const int nblocks = static_cast<int>(es.blocks.size());
  std::vector<BlockResult> results(nblocks);

  auto run_block = [&](int bi) {
    const auto& blk = es.blocks[bi];
    const int m = blk.size();
    Eigen::MatrixXcd sub(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c)
        sub(r, c) = h.matrix(blk.basis_states[r], blk.basis_states[c]);
    results[bi] = solve_block(sub);
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int bi = 0; bi < nblocks; ++bi) run_block(bi);
  } else {
    for (int bi = 0; bi < nblocks; ++bi) run_block(bi);
  }

  es.energies.resize(dim);
  es.vectors = Eigen::MatrixXcd::Zero(dim, dim);
  es.manifold.resize(dim);
  es.block_of_level.resize(dim);
  for (int bi = 0; bi < nblocks; ++bi) {
    const auto& blk = es.blocks[bi];
    const auto& res = results[bi];
    for (int k = 0; k < blk.size(); ++k) {
      const int lv = blk.level_begin + k;
      es.energies(lv) = res.energies(k);
      es.manifold[lv] = blk.key;
      es.block_of_level[lv] = bi;
      for (int r = 0; r < blk.size(); ++r)
        es.vectors(blk.basis_states[r], lv) = res.vectors(r, k);
    }
  }
  return es;
}

}  // namespace nmrqip
