#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nmrqip/transitions.hpp"
#include "nmrqip/zcosy.hpp"

namespace nmrqip {

/// Transition row as consumed by the reconstructor (id, frequency, species).
struct TransitionRecord {
  int id = 0;
  double freq_hz = 0.0;
  std::string species;
};

std::vector<TransitionRecord> to_records(const TransitionTable& table);

struct DiagramLevel {
  int id = 0;
  double energy_hz = 0.0;  // relative; each component's reference level is 0
  std::string label;       // optional computational label
};

struct DiagramEdge {
  int transition_id = 0;
  int upper = 0;  // level ids
  int lower = 0;
  double freq_hz = 0.0;
};

struct DiagramComponent {
  std::vector<DiagramLevel> levels;  // descending energy
  std::vector<DiagramEdge> edges;    // ascending transition id
};

/// Reconstructed energy-level diagram.
struct LevelDiagram {
  std::vector<DiagramComponent> components;
  int expected_levels = -1;  // 2^n when n_spins was declared
  double tol = 0.0;
  int solutions_found = 1;  // meaningful in exhaustive mode
  bool solution_count_capped = false;
  std::vector<std::string> ambiguity_notes;

  int total_levels() const;
  const DiagramComponent& component_of_edge(int transition_id) const;
};

/// Build the level diagram consistent with a transition list and a signed
/// connectivity matrix.
///
/// Every transition contributes an (upper, lower) endpoint pair with
/// E_upper = E_lower + freq. Every connectivity asserts one shared endpoint,
/// with two role options: progressive {upper(i)=lower(j)} or
/// {lower(i)=upper(j)}; regressive {lower(i)=lower(j)} or {upper(i)=upper(j)}.
/// The solver backtracks over these binary choices (progressive first branch
/// upper(i)=lower(j), regressive first branch lower=lower; connectivities in
/// (min id, max id) order), merging endpoints with a union-find and pruning
/// on energy-closure violations beyond `tol`. Disconnected groups of
/// transitions are reconstructed as separate components, each with its own
/// zero reference (the lower level of its smallest transition id).
///
/// Returns the first solution. In exhaustive mode all solutions are counted
/// (deduplicated, capped) and undetermined merges are reported.
/// Throws ReconstructionError when no consistent assignment exists; the
/// message reports the largest consistent connectivity prefix reached.
LevelDiagram reconstruct_levels(const std::vector<TransitionRecord>& transitions,
                                const ConnectivityMatrix& connectivity,
                                std::optional<int> n_spins, double tol,
                                bool exhaustive = false);

struct VerifyReport {
  double max_residual_hz = 0.0;
  std::vector<std::pair<int, double>> flagged_edges;  // (transition id, residual)
  std::vector<int> unassigned_transitions;  // ids absent or in isolated 1-edge components
  int n_levels = 0;
  int expected_levels = -1;
  int n_components = 0;

  bool all_pass() const;
};

/// Check energy closure of every edge against the transition list, count
/// levels against the 2^n expectation, and list unassigned transitions.
VerifyReport verify_diagram(const LevelDiagram& diagram,
                            const std::vector<TransitionRecord>& transitions,
                            double tol);

/// Deterministic graph-description text (DOT), levels ranked by energy.
std::string export_dot(const LevelDiagram& diagram);

/// Parse text produced by export_dot (round-trip of node/edge sets).
LevelDiagram import_dot(const std::string& text);

}  // namespace nmrqip
