#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmrqip/gate_compiler.hpp"
#include "nmrqip/model.hpp"
#include "nmrqip/pulses.hpp"

namespace nmrqip {

/// Pair of pseudopure states: (pi-inverted equilibrium, crushed) minus
/// equilibrium. Exactly two nonzero populations of equal magnitude and
/// opposite sign, no coherences.
DensityState prepare_pops(const Model& model, int transition_id,
                          double flip_error = 0.0);

/// Subsystem pseudopure state by spatially averaged logical labeling:
/// hard pi/2 on every species except the target's, crush, then selective pi
/// on the target heteronuclear transition. Within each target-species
/// manifold all populations are equal except the moved level.
DensityState prepare_sallt(const Model& model, int transition_id,
                           double flip_error = 0.0);

/// Controlled-NOT via one selective pi pulse. The transition's two labels
/// must differ in exactly one bit. A crusher follows by default.
DensityState apply_cnnot(const Model& model, const DensityState& state,
                         int transition_id, bool crush_after = true,
                         double flip_error = 0.0);

/// Controlled-SWAP via a three-pulse ladder sequence (e, f, e), net effect
/// the transposition of the two outer levels. A crusher follows each pulse
/// by default.
DensityState apply_cswap(const Model& model, const DensityState& state,
                         const std::array<int, 3>& sequence,
                         bool crush_after = true, double flip_error = 0.0);

struct CoherenceEntry {
  int level_a = 0, level_b = 0;  // a < b
  std::string label_a, label_b;
  std::map<std::string, int> order;  // quantum order per species
  double magnitude = 0.0;
  double phase = 0.0;
  std::optional<double> omega1_hz;  // signed frequency sum along a shortest
                                    // transition path; absent when none exists
  bool no_path = false;
};

struct CoherenceReport {
  double floor = 1e-9;
  std::vector<CoherenceEntry> entries;  // descending magnitude

  const CoherenceEntry* dominant() const;
};

/// Every off-diagonal element above the floor, annotated with labels,
/// per-species coherence order and composite omega1 frequency.
CoherenceReport coherence_report(const Model& model, const DensityState& state,
                                 double floor = 1e-9);

/// Overlap of a deviation state with a pure target on a level subspace:
/// (<psi|rho_S|psi> - background) / (lambda_max - background), background
/// being the median eigenvalue of the restricted matrix. Maps an ideal
/// pseudopure or subsystem-PPS deviation onto |<psi|phi>|^2.
double fidelity(const DensityState& state, const Eigen::VectorXcd& target,
                const std::vector<int>& subspace_levels);

struct EntanglementStage {
  std::string name;
  double fidelity = 0.0;
  bool flagged = false;  // fidelity below the configured floor
  Eigen::VectorXd populations;
  CoherenceReport report;
};

struct EntanglementResult {
  double flip_error = 0.0;
  double fidelity_floor = 0.0;
  std::vector<int> subsystem_levels;  // the working manifold
  std::vector<EntanglementStage> stages;
};

/// Entanglement creation and transfer in the lower manifold of the
/// heteronucleus: subsystem PPS, one-qubit superposition, CNOT to an EPR
/// pair, then a three-pulse swap moving the entanglement to the outer qubit
/// pair. Stage fidelities are measured against the ideal target states.
EntanglementResult run_entanglement_transfer(const Model& model,
                                             double flip_error = 0.0,
                                             double fidelity_floor = 0.9);

}  // namespace nmrqip
