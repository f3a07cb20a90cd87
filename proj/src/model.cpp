#include "nmrqip/model.hpp"

namespace nmrqip {

Model Model::build(SpinSystem sys, double rel_threshold, Exec exec) {
  Model m;
  m.system = std::move(sys);
  const HamiltonianMatrix h = build_hamiltonian(m.system);
  m.eigen = std::make_shared<const EigenSystem>(diagonalize(h, m.system, exec));
  m.table = compute_transitions(*m.eigen, m.system, rel_threshold, exec);
  try {
    m.labels = label_states(*m.eigen, m.system);
  } catch (const ValidationError& e) {
    m.label_error = e.what();
  }
  return m;
}

const LabelMap& Model::require_labels() const {
  if (!labels)
    throw ProtocolError("computational labeling unavailable: " + label_error);
  return *labels;
}

DensityState Model::equilibrium() const {
  return equilibrium_state(system, eigen);
}

const Transition& Model::transition_between_labels(int label_a, int label_b) const {
  const LabelMap& lm = require_labels();
  const int la = lm.level(label_a);
  const int lb = lm.level(label_b);
  const Transition* t = table.find_by_levels(la, lb);
  if (!t)
    throw ProtocolError("no observable transition connects labels " +
                        LabelMap::bits(label_a, system.n_spins) + " and " +
                        LabelMap::bits(label_b, system.n_spins));
  return *t;
}

}  // namespace nmrqip
