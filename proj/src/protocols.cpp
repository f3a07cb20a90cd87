#include "nmrqip/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace nmrqip {

namespace {

using std::numbers::pi;

// Phase that moves population amplitude from `from` to the other level of t
// with a real positive coefficient (so ideal protocols hit real-amplitude
// targets).
double transfer_phase(const Transition& t, int from) {
  return from == t.m_upper ? pi / 2.0 : -pi / 2.0;
}

// Signed frequency sum along the shortest transition path a -> b;
// telescopes to E(a) - E(b) for any path. Deterministic BFS, lowest
// neighbor first.
std::optional<double> composite_frequency(const TransitionTable& table, int a,
                                          int b) {
  if (a == b) return 0.0;
  std::vector<std::vector<std::pair<int, int>>> adj(table.n_levels);
  for (const auto& t : table.rows) {
    adj[t.upper].push_back({t.lower, t.id});
    adj[t.lower].push_back({t.upper, t.id});
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());

  std::vector<int> prev_level(table.n_levels, -1), prev_edge(table.n_levels, -1);
  std::deque<int> queue{a};
  prev_level[a] = a;
  while (!queue.empty() && prev_level[b] < 0) {
    const int v = queue.front();
    queue.pop_front();
    for (const auto& [w, id] : adj[v]) {
      if (prev_level[w] >= 0) continue;
      prev_level[w] = v;
      prev_edge[w] = id;
      queue.push_back(w);
    }
  }
  if (prev_level[b] < 0) return std::nullopt;

  double sum = 0.0;
  for (int v = b; v != a; v = prev_level[v]) {
    const Transition& t = table.by_id(prev_edge[v]);
    // walking backwards: step prev -> v; descending the M ladder adds +freq
    sum += prev_level[v] == t.m_upper ? t.freq_hz : -t.freq_hz;
  }
  return sum;
}

}  // namespace

DensityState prepare_pops(const Model& model, int transition_id,
                          double flip_error) {
  const DensityState eq = model.equilibrium();
  DensityState inverted =
      selective_pulse(eq, model.table, transition_id, pi, 0.0, flip_error);
  inverted = crush(inverted, CrushMode::all);
  return subtract_states(inverted, eq);
}

DensityState prepare_sallt(const Model& model, int transition_id,
                           double flip_error) {
  const Transition& target = model.table.by_id(transition_id);
  const auto species = model.system.manifold_species_order();
  if (species.size() < 2)
    throw ProtocolError("target is not a heteronuclear transition: system has "
                        "a single species");

  DensityState state = model.equilibrium();
  for (const auto& tag : species) {
    if (tag == target.species) continue;
    state = hard_pulse(state, model.system, tag, pi / 2.0, 0.0, flip_error);
  }
  state = crush(state, CrushMode::all);
  state = selective_pulse(state, model.table, transition_id, pi, 0.0, flip_error);
  return crush(state, CrushMode::all);
}

DensityState apply_cnnot(const Model& model, const DensityState& state,
                         int transition_id, bool crush_after, double flip_error) {
  const Transition& t = model.table.by_id(transition_id);
  const LabelMap& labels = model.require_labels();
  const int diff = labels.label(t.upper) ^ labels.label(t.lower);
  if (diff == 0 || (diff & (diff - 1)) != 0)
    throw ProtocolError("not a controlled-NOT transition: labels " +
                        labels.label_string(t.upper) + " and " +
                        labels.label_string(t.lower) +
                        " differ in more than one bit");
  DensityState out =
      selective_pulse(state, model.table, transition_id, pi, 0.0, flip_error);
  return crush_after ? crush(out, CrushMode::all) : out;
}

DensityState apply_cswap(const Model& model, const DensityState& state,
                         const std::array<int, 3>& sequence, bool crush_after,
                         double flip_error) {
  const Transition& e1 = model.table.by_id(sequence[0]);
  const Transition& e2 = model.table.by_id(sequence[1]);
  if (sequence[2] != sequence[0])
    throw ProtocolError("invalid ladder: swap sequence must be a palindrome");
  if (sequence[1] != sequence[0] && e1.shared_level(e2) < 0)
    throw ProtocolError("invalid ladder: middle transition shares no level "
                        "with the outer pulses");
  DensityState out = state;
  for (int id : sequence) {
    out = selective_pulse(out, model.table, id, pi, 0.0, flip_error);
    if (crush_after) out = crush(out, CrushMode::all);
  }
  return out;
}

const CoherenceEntry* CoherenceReport::dominant() const {
  return entries.empty() ? nullptr : &entries.front();
}

CoherenceReport coherence_report(const Model& model, const DensityState& state,
                                 double floor) {
  CoherenceReport report;
  report.floor = floor;
  const auto& es = *state.basis;
  const int dim = state.dim();
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      const Complex v = state.matrix(a, b);
      if (std::abs(v) <= floor) continue;
      CoherenceEntry e;
      e.level_a = a;
      e.level_b = b;
      if (model.labels) {
        e.label_a = model.labels->label_string(a);
        e.label_b = model.labels->label_string(b);
      }
      for (size_t s = 0; s < es.manifold_species.size(); ++s)
        e.order[es.manifold_species[s]] =
            (es.manifold[a][s] - es.manifold[b][s]) / 2;
      e.magnitude = std::abs(v);
      e.phase = std::arg(v);
      e.omega1_hz = composite_frequency(model.table, a, b);
      if (!e.omega1_hz) {
        e.no_path = true;
        warn("coherence (" + std::to_string(a) + "," + std::to_string(b) +
             ") has no connecting transition path; omega1 omitted");
      }
      report.entries.push_back(e);
    }
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const CoherenceEntry& x, const CoherenceEntry& y) {
              if (x.magnitude != y.magnitude) return x.magnitude > y.magnitude;
              return std::tie(x.level_a, x.level_b) <
                     std::tie(y.level_a, y.level_b);
            });
  return report;
}

double fidelity(const DensityState& state, const Eigen::VectorXcd& target,
                const std::vector<int>& subspace_levels) {
  if (target.size() != state.matrix.rows())
    throw ValidationError("fidelity target has wrong dimension");
  if (std::abs(target.norm() - 1.0) > 1e-9)
    throw ValidationError("target not normalized");

  const int m = static_cast<int>(subspace_levels.size());
  if (m < 2) throw ValidationError("fidelity subspace needs at least 2 levels");
  double outside = target.squaredNorm();
  Eigen::MatrixXcd rho_s(m, m);
  Eigen::VectorXcd psi_s(m);
  for (int r = 0; r < m; ++r) {
    psi_s(r) = target(subspace_levels[r]);
    outside -= std::norm(target(subspace_levels[r]));
    for (int c = 0; c < m; ++c)
      rho_s(r, c) = state.matrix(subspace_levels[r], subspace_levels[c]);
  }
  if (outside > 1e-9)
    throw ValidationError("target not supported on the subsystem subspace");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_s,
                                                         Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();  // ascending
  const double background =
      m % 2 ? ev(m / 2) : 0.5 * (ev(m / 2 - 1) + ev(m / 2));
  const double span = ev(m - 1) - background;
  if (span < 1e-15) return 0.0;
  const double overlap = std::real(psi_s.dot(rho_s * psi_s));
  return (overlap - background) / span;
}

EntanglementResult run_entanglement_transfer(const Model& model,
                                             double flip_error,
                                             double fidelity_floor) {
  const LabelMap& labels = model.require_labels();
  const auto species = model.system.manifold_species_order();
  if (species.size() < 2)
    throw ProtocolError("entanglement transfer needs a heteronuclear system");
  const auto ancilla_spins = model.system.spins_of(species.front());
  if (ancilla_spins.size() != 1)
    throw ProtocolError("entanglement transfer needs a single-spin ancilla "
                        "species");
  const int n = model.system.n_spins;
  const int ancilla = ancilla_spins.front();
  std::vector<int> qubits;
  for (int i = 0; i < n; ++i)
    if (i != ancilla) qubits.push_back(i);
  if (qubits.size() < 4)
    throw ProtocolError("entanglement transfer needs at least four subsystem "
                        "qubits");
  auto bit = [&](int spin) { return 1 << (n - 1 - spin); };

  // working manifold: ancilla in |1>; subsystem states named by the paper's
  // 4-qubit pattern
  const int b0 = bit(ancilla);
  const int b_super = b0 | bit(qubits[1]);                  // |0100>
  const int b_epr = b_super | bit(qubits[2]);               // |0110>
  const int b_out = b0 | bit(qubits[0]) | bit(qubits[3]);   // |1001>

  EntanglementResult result;
  result.flip_error = flip_error;
  result.fidelity_floor = fidelity_floor;
  for (int lv = 0; lv < model.eigen->dim(); ++lv)
    if (model.eigen->manifold[lv][0] == -1) result.subsystem_levels.push_back(lv);

  const int dim = model.eigen->dim();
  auto pure = [&](std::initializer_list<int> lab_list) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (int lab : lab_list) v(labels.level(lab)) = 1.0;
    v.normalize();
    return v;
  };
  auto push_stage = [&](const std::string& name, const DensityState& st,
                        const Eigen::VectorXcd& target) {
    EntanglementStage stage;
    stage.name = name;
    stage.fidelity = fidelity(st, target, result.subsystem_levels);
    stage.flagged = stage.fidelity < fidelity_floor;
    stage.populations = st.populations();
    stage.report = coherence_report(model, st);
    result.stages.push_back(std::move(stage));
  };

  // stage 1: subsystem PPS via the heteronuclear transition |0..0> <-> |10..0>
  const Transition& t_star = model.transition_between_labels(0, b0);
  DensityState state = prepare_sallt(model, t_star.id, flip_error);
  push_stage("subsystem_pps", state, pure({b0}));

  // stage 2: uniform superposition on the second subsystem qubit
  const Transition& t_super = model.transition_between_labels(b0, b_super);
  state = selective_pulse(state, model.table, t_super.id, pi / 2.0,
                          transfer_phase(t_super, labels.level(b0)), flip_error);
  push_stage("superposition", state, pure({b0, b_super}));

  // stage 3: CNOT on the third qubit controlled by the second -> EPR pair
  const Transition& t_cnot = model.transition_between_labels(b_super, b_epr);
  state = selective_pulse(state, model.table, t_cnot.id, pi,
                          transfer_phase(t_cnot, labels.level(b_super)),
                          flip_error);
  push_stage("epr", state, pure({b0, b_epr}));

  // stage 4: three-pulse swap transfers the entanglement to the outer qubits
  const PulseSequence swap =
      compile_level_swap(model.table, labels.level(b_epr), labels.level(b_out));
  if (swap.length() != 3)
    throw ProtocolError("entanglement swap did not compile to three pulses");
  int from = labels.level(b_epr);
  for (int k = 0; k < 3; ++k) {
    const Transition& t = model.table.by_id(swap.transition_ids[k]);
    const double phase = k < 2
                             ? transfer_phase(t, from)
                             : transfer_phase(t, labels.level(b_epr));
    state = selective_pulse(state, model.table, t.id, pi, phase, flip_error);
    if (k < 2) from = t.m_upper == from ? t.m_lower : t.m_upper;
  }
  push_stage("transfer", state, pure({b0, b_out}));
  return result;
}

}  // namespace nmrqip
