#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nmrqip/eigensystem.hpp"

namespace nmrqip {

/// One observable single-quantum transition.
///
/// `upper`/`lower` order the pair by energy (freq = E_upper - E_lower >= 0);
/// `m_upper`/`m_lower` order it by the active species' magnetic quantum
/// number (M(m_upper) = M(m_lower) + 1). The two orderings coincide for
/// systems whose offsets dominate the coupling shifts.
struct Transition {
  int id = 0;        // serial, 1-based
  int upper = 0;     // higher-energy level
  int lower = 0;
  int m_upper = 0;   // higher-M level of the active species
  int m_lower = 0;
  double freq_hz = 0.0;
  double intensity = 0.0;  // |<m_upper|F+|m_lower>|^2
  Complex mu;              // <m_upper|F+|m_lower>
  std::string species;

  bool touches(int level) const { return upper == level || lower == level; }
  int shared_level(const Transition& o) const;  // -1 when disjoint
};

struct TransitionTable {
  std::vector<Transition> rows;
  int n_levels = 0;
  std::vector<std::vector<int>> touching;  // level -> indices into rows

  const Transition& by_id(int id) const;
  const Transition* find_by_levels(int a, int b) const;
  bool empty() const { return rows.empty(); }
};

/// Scan all manifold-allowed level pairs for transitions with intensity above
/// `rel_threshold` times the strongest line. Rows are numbered serially,
/// grouped by species (numbering order), ascending frequency within a group.
TransitionTable compute_transitions(const EigenSystem& es, const SpinSystem& sys,
                                    double rel_threshold = 1e-3,
                                    Exec exec = Exec::parallel);

/// True when every transition's energy ordering matches its M ordering.
/// The 2D connectivity pipeline and reconstruction assume this.
bool order_aligned(const TransitionTable& table);

}  // namespace nmrqip
