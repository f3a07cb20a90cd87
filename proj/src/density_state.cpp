#include "nmrqip/density_state.hpp"

namespace nmrqip {

DensityState equilibrium_state(const SpinSystem& sys, const EigenSystemPtr& es) {
  const int dim = es->dim();
  DensityState state;
  state.basis = es;
  state.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  // Each species' total Fz commutes with H, so the eigenbasis diagonal of
  // sum_i gamma_i I_zi is exactly sum_s gamma_s M_s(level).
  for (int lv = 0; lv < dim; ++lv) {
    double p = 0.0;
    for (size_t s = 0; s < es->manifold_species.size(); ++s)
      p += sys.gamma_of(es->manifold_species[s]) * 0.5 * es->manifold[lv][s];
    state.matrix(lv, lv) = p;
  }
  return state;
}

DensityState subtract_states(const DensityState& a, const DensityState& b) {
  if (a.basis != b.basis || a.dim() != b.dim())
    throw ValidationError("subtract_states: states use different eigenbases");
  DensityState out;
  out.basis = a.basis;
  out.matrix = a.matrix - b.matrix;
  return out;
}

}  // namespace nmrqip
